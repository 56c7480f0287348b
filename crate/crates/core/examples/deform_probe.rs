use bracketflow::corpus;
use bracketflow::flow::{flow, grad_f, is_critical, FloatBracket, FlowParams};
use bracketflow::qmat::QMat;

fn main() {
    let l4 = corpus::filiform4();
    let g = QMat::from_i64(&[&[1,1,0,0],&[0,1,0,0],&[0,0,1,0],&[0,0,0,1]]);
    let moved = l4.act(&g).unwrap();
    let traj = flow(&FloatBracket::from_rational(&moved), FlowParams::default());
    let lim = traj.limit.clone();
    println!("start tail from residual {:.3e}", is_critical(&lim, 1e-12).residual);
    // manual small fixed-step euler to see if residual contracts at all
    let mut y = lim.normalized();
    let mut h = 0.01;
    for step in 0..2000 {
        let g = grad_f(&y);
        y = y.add_scaled(&g, -h).normalized();
        if step % 200 == 0 {
            let c = is_critical(&y, 1e-14);
            println!("step {step:5} h={h:.3} residual={:.6e} F={:.12}", c.residual, y.f_value());
        }
        h = (h * 1.1).min(50.0);
    }
    let c = is_critical(&y, 1e-14);
    println!("final residual {:.6e} F {:.12}", c.residual, y.f_value());
}
