use bracketflow::corpus;
use bracketflow::derivations::derivation_algebra;
use bracketflow::flow::{distinguished_verdict, FlowParams};
use std::time::Instant;

fn main() {
    for (name, mu) in [("jordan", corpus::jordan_block_solvable()), ("sol3", corpus::sol3())] {
        let t0 = Instant::now();
        let der = derivation_algebra(&mu).dim();
        let rep = distinguished_verdict(&mu, der, FlowParams::default()).unwrap();
        println!("{name}: verdict={:?} settled={} derdim {}->{} F={:.9} res={:.3e} steps={} [{:?}]",
            rep.distinguished, rep.settled, rep.der_dim_start, rep.der_dim_limit,
            rep.trajectory.final_f, rep.trajectory.final_residual, rep.trajectory.steps, t0.elapsed());
    }
}
