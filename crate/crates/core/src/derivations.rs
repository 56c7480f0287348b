//! Derivation algebras, the pre-Einstein equation, and the auxiliary
//! subalgebras `𝔤_φ`, `𝔥_μ`, and `𝔦_𝔤(𝔥)` feeding the decision procedures.

use crate::algebra::{is_semisimple, MatrixAlgebra};
use crate::bracket::BracketTensor;
use crate::qmat::QMat;
use crate::rational::Q;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DerivationsError {
    #[error("the pre-Einstein linear system has no solution over Der(μ); this contradicts the existence guarantee and indicates an input or arithmetic bug")]
    NoSolution,
    #[error("subalgebra inputs are inconsistent: {0}")]
    NotSubalgebra(String),
}

/// Kernel of `X ↦ π(X)μ` inside `gl(n)`: the derivation algebra.
pub fn derivation_algebra(mu: &BracketTensor) -> MatrixAlgebra {
    let n = mu.dim();
    let pair_count = n * (n - 1) / 2;
    let rows = pair_count * n;
    let mut sys = QMat::zeros(rows, n * n);
    for a in 0..n {
        for b in 0..n {
            let col_idx = a * n + b;
            let mut e = QMat::zeros(n, n);
            e[(a, b)] = Q::one();
            let image = mu.infinitesimal_act(&e);
            let mut r = 0;
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        sys[(r * n + k, col_idx)] = image.coeff(i, j, k);
                    }
                    r += 1;
                }
            }
        }
    }
    let kernel = sys.kernel();
    let mats: Vec<QMat> = kernel
        .into_iter()
        .map(|v| QMat::from_flat(n, n, v))
        .collect();
    MatrixAlgebra::lie_closed(n, mats).expect("derivation algebras are Lie closed")
}

/// A solution of the trace equation `tr(φψ) = tr(ψ)` over the derivation
/// algebra, with its semisimplicity report.
#[derive(Debug, Clone)]
pub struct PreEinsteinSolution {
    pub phi: QMat,
    pub semisimple: bool,
    /// Eigenvalues with multiplicities when the minimal polynomial splits
    /// over ℚ; `None` otherwise.
    pub eigenvalues: Option<Vec<(Q, usize)>>,
    /// `Some(false)` certifies irrational eigenvalues; `None` means the
    /// root extraction gave up.
    pub splits_over_q: Option<bool>,
    /// Positivity of all eigenvalues, when they are known.
    pub all_positive: Option<bool>,
    /// Exact certificate that every eigenvalue is real.
    pub all_eigenvalues_real: bool,
}

/// Solves `tr(φψ_j) = tr(ψ_j)` for `φ ∈ Der(μ)`.
///
/// The solve is attempted over the span of symmetric derivations first and
/// falls back to the whole derivation algebra; in both cases the
/// minimum-norm coefficient solution is returned, so the output is
/// deterministic even when the Gram matrix is singular.
pub fn pre_einstein(mu: &BracketTensor) -> Result<PreEinsteinSolution, DerivationsError> {
    let der = derivation_algebra(mu);
    let sym = der.symmetric_part();
    let phi = solve_trace_equation(&sym, der.basis())
        .or_else(|| solve_trace_equation(der.basis(), der.basis()))
        .ok_or(DerivationsError::NoSolution)?;
    Ok(report_solution(phi))
}

/// Same trace equation, with `φ` constrained to a given span of candidate
/// matrices (used with `ad 𝔰|𝔫` by the Einstein algorithm). Returns the
/// solution and its coefficients on `candidates`, or `None` when no solution
/// exists in the span.
pub fn pre_einstein_in_span(
    candidates: &[QMat],
    der_basis: &[QMat],
) -> Option<(PreEinsteinSolution, Vec<Q>)> {
    let (phi, coeffs) = solve_trace_equation_with_coeffs(candidates, der_basis)?;
    Some((report_solution(phi), coeffs))
}

fn report_solution(phi: QMat) -> PreEinsteinSolution {
    let rep = is_semisimple(&phi);
    let eigenvalues = rep.eigenvalues_rational.clone();
    let all_positive = eigenvalues
        .as_ref()
        .map(|eigs| eigs.iter().all(|(v, _)| v.is_positive()));
    PreEinsteinSolution {
        phi,
        semisimple: rep.is_semisimple,
        eigenvalues,
        splits_over_q: rep.splits_over_q,
        all_positive,
        all_eigenvalues_real: rep.all_eigenvalues_real,
    }
}

/// Minimum-norm coefficient solution of `tr(φ ψ_j) = tr(ψ_j)` with
/// `φ = Σ x_c candidates_c`, or `None` when inconsistent.
fn solve_trace_equation(candidates: &[QMat], psis: &[QMat]) -> Option<QMat> {
    solve_trace_equation_with_coeffs(candidates, psis).map(|(phi, _)| phi)
}

fn solve_trace_equation_with_coeffs(
    candidates: &[QMat],
    psis: &[QMat],
) -> Option<(QMat, Vec<Q>)> {
    if candidates.is_empty() {
        // Only consistent when every ψ is traceless; then φ = 0 works.
        let n = psis.first().map_or(1, QMat::rows);
        return psis
            .iter()
            .all(|p| p.trace().is_zero())
            .then(|| (QMat::zeros(n, n), Vec::new()));
    }
    let rows = psis.len();
    let sys = QMat::from_fn(rows, candidates.len(), |j, c| candidates[c].trace_product(&psis[j]));
    let rhs: Vec<Q> = psis.iter().map(QMat::trace).collect();
    let x = min_norm_solve(&sys, &rhs)?;
    let n = candidates[0].rows();
    let mut phi = QMat::zeros(n, n);
    for (c, m) in x.iter().zip(candidates) {
        phi = &phi + &m.scale(c);
    }
    Some((phi, x))
}

/// Exact minimum-norm solution of a consistent linear system; `None` when
/// inconsistent. The particular solution is projected orthogonally off the
/// kernel of the system.
pub fn min_norm_solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let particular = a.solve(b)?;
    let kernel = a.kernel();
    if kernel.is_empty() {
        return Some(particular);
    }
    let k = kernel.len();
    let gram = QMat::from_fn(k, k, |i, j| crate::qmat::vec_ops::dot(&kernel[i], &kernel[j]));
    let proj_rhs: Vec<Q> = kernel
        .iter()
        .map(|kv| crate::qmat::vec_ops::dot(kv, &particular))
        .collect();
    let y = gram.solve(&proj_rhs).expect("Gram matrix of independent vectors is invertible");
    let mut out = particular;
    for (c, kv) in y.iter().zip(&kernel) {
        out = crate::qmat::vec_ops::sub(&out, &crate::qmat::vec_ops::scale(kv, c));
    }
    Some(out)
}

/// `𝔤_φ = {X ∈ sl(n) : [X, φ] = 0, tr(Xφ) = 0}`.
pub fn g_phi(mu: &BracketTensor, phi: &QMat) -> MatrixAlgebra {
    let n = mu.dim();
    let n2 = n * n;
    // Unknown X ranges over gl(n); rows: commutator coords + two traces.
    let sys = QMat::from_fn(n2 + 2, n2, |r, c| {
        let (a, b) = (c / n, c % n);
        let mut e = QMat::zeros(n, n);
        e[(a, b)] = Q::one();
        if r < n2 {
            e.commutator(phi).flatten()[r].clone()
        } else if r == n2 {
            e.trace_product(phi)
        } else {
            e.trace()
        }
    });
    let mats: Vec<QMat> = sys.kernel().into_iter().map(|v| QMat::from_flat(n, n, v)).collect();
    MatrixAlgebra::lie_closed(n, mats).expect("g_phi is Lie closed")
}

/// `𝔥_μ = 𝔤_φ ∩ Der(μ)`: the stabilizer subalgebra of `𝔤_φ` at `μ`.
pub fn stabilizer_h(g_phi: &MatrixAlgebra, der: &MatrixAlgebra) -> MatrixAlgebra {
    g_phi.intersect(der)
}

/// `𝔦 = {X ∈ 𝔷_𝔤(𝔥) : tr(XY) = 0 for all Y ∈ 𝔷_𝔤(𝔥) ∩ 𝔥}`.
pub fn i_subalgebra(
    g: &MatrixAlgebra,
    h: &MatrixAlgebra,
) -> Result<MatrixAlgebra, DerivationsError> {
    if !g.as_subspace().contains_subspace(h.as_subspace()) {
        return Err(DerivationsError::NotSubalgebra("𝔥 is not contained in 𝔤".into()));
    }
    let z = g.centralizer(h.basis());
    let w = z.intersect(h);
    let result = if w.is_zero() || z.is_zero() {
        z
    } else {
        let sys = QMat::from_fn(w.dim(), z.dim(), |i, j| z.basis()[j].trace_product(&w.basis()[i]));
        let mats: Vec<QMat> = sys.kernel().into_iter().map(|k| z.element(&k)).collect();
        MatrixAlgebra::span(g.ambient_dim(), mats)
    };
    if !result.check_lie_closed() {
        return Err(DerivationsError::NotSubalgebra(
            "trace-orthogonal complement failed the closure check".into(),
        ));
    }
    MatrixAlgebra::lie_closed(g.ambient_dim(), result.basis().to_vec())
        .map_err(|_| DerivationsError::NotSubalgebra("closure rebuild failed".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::{q, qi};

    #[test]
    fn derivation_dimensions() {
        assert_eq!(derivation_algebra(&corpus::abelian(3)).dim(), 9);
        assert_eq!(derivation_algebra(&corpus::heisenberg3()).dim(), 6);
        assert_eq!(derivation_algebra(&corpus::hyperbolic_plane()).dim(), 2);
    }

    #[test]
    fn derivations_annihilate_mu() {
        for (_, mu) in corpus::nilpotent_corpus() {
            let der = derivation_algebra(&mu);
            for d in der.basis() {
                assert!(mu.infinitesimal_act(d).is_zero());
            }
        }
    }

    #[test]
    fn pre_einstein_abelian_is_identity() {
        let sol = pre_einstein(&corpus::abelian(4)).unwrap();
        assert_eq!(sol.phi, QMat::identity(4));
        assert!(sol.semisimple);
        assert_eq!(sol.all_positive, Some(true));
    }

    #[test]
    fn pre_einstein_h3() {
        let sol = pre_einstein(&corpus::heisenberg3()).unwrap();
        assert_eq!(sol.phi, QMat::diagonal(&[q(2, 3), q(2, 3), q(4, 3)]));
        assert!(sol.semisimple);
        let eigs = sol.eigenvalues.unwrap();
        assert_eq!(eigs, vec![(q(2, 3), 2), (q(4, 3), 1)]);
        assert_eq!(sol.all_positive, Some(true));
    }

    #[test]
    fn pre_einstein_h3_plus_line() {
        // Frozen from an independent dense solve: eigenvalues 2/3, 2/3, 4/3, 1.
        let mu = corpus::heisenberg3().direct_sum(&corpus::abelian(1));
        let sol = pre_einstein(&mu).unwrap();
        assert!(sol.semisimple);
        let phi = &sol.phi;
        assert!(mu.infinitesimal_act(phi).is_zero(), "φ must be a derivation");
        let mut eigs = sol.eigenvalues.unwrap();
        eigs.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(eigs, vec![(q(2, 3), 2), (qi(1), 1), (q(4, 3), 1)]);
    }

    #[test]
    fn pre_einstein_satisfies_trace_identity() {
        for (_, mu) in corpus::nilpotent_corpus() {
            let der = derivation_algebra(&mu);
            let sol = pre_einstein(&mu).unwrap();
            for psi in der.basis() {
                assert_eq!(sol.phi.trace_product(psi), psi.trace());
            }
            assert!(mu.infinitesimal_act(&sol.phi).is_zero());
        }
    }

    #[test]
    fn g_phi_examples() {
        // Abelian: everything commutes with Id, both trace conditions give sl(n).
        let mu = corpus::abelian(3);
        let sol = pre_einstein(&mu).unwrap();
        let g = g_phi(&mu, &sol.phi);
        assert_eq!(g.dim(), 8);

        // h3: commutant of diag(2/3,2/3,4/3) is gl(2)⊕gl(1); the two trace
        // conditions are independent on it, leaving the sl(2) block.
        let h3 = corpus::heisenberg3();
        let sol = pre_einstein(&h3).unwrap();
        let g = g_phi(&h3, &sol.phi);
        assert_eq!(g.dim(), 3);
        for b in g.basis() {
            assert!(b.trace().is_zero());
            assert!(b.commutator(&sol.phi).is_zero());
            assert!(b.trace_product(&sol.phi).is_zero());
        }

        // Dimension one: sl(1) = 0.
        let one = corpus::abelian(1);
        let sol = pre_einstein(&one).unwrap();
        assert!(g_phi(&one, &sol.phi).is_zero());
    }

    #[test]
    fn stabilizer_h_examples() {
        let h3 = corpus::heisenberg3();
        let sol = pre_einstein(&h3).unwrap();
        let g = g_phi(&h3, &sol.phi);
        let der = derivation_algebra(&h3);
        let h = stabilizer_h(&g, &der);
        assert_eq!(h.dim(), 3);

        let ab = corpus::abelian(3);
        let sol = pre_einstein(&ab).unwrap();
        let g = g_phi(&ab, &sol.phi);
        let h = stabilizer_h(&g, &derivation_algebra(&ab));
        assert_eq!(h.dim(), 8); // sl(3)
    }

    #[test]
    fn i_subalgebra_examples() {
        let g = MatrixAlgebra::gl(2);
        // 𝔥 = 0 → 𝔦 = 𝔤
        let i = i_subalgebra(&g, &MatrixAlgebra::zero(2)).unwrap();
        assert_eq!(i.dim(), 4);

        // 𝔥 = 𝔤 abelian → 𝔦 = trace-orthogonal of 𝔤 inside 𝔤
        let diag = MatrixAlgebra::lie_closed(
            2,
            vec![QMat::diagonal(&[qi(1), qi(0)]), QMat::diagonal(&[qi(0), qi(1)])],
        )
        .unwrap();
        let i = i_subalgebra(&diag, &diag).unwrap();
        // {X diagonal : tr(X·E11)=tr(X·E22)=0} = 0
        assert!(i.is_zero());

        // h3 pipeline: 𝔥 = 𝔤_φ, so the centralizer is the center of sl(2) = 0.
        let h3 = corpus::heisenberg3();
        let sol = pre_einstein(&h3).unwrap();
        let g = g_phi(&h3, &sol.phi);
        let h = stabilizer_h(&g, &derivation_algebra(&h3));
        let i = i_subalgebra(&g, &h).unwrap();
        assert!(i.is_zero());

        // 𝔥 ⊄ 𝔤 is rejected
        let not_inside = MatrixAlgebra::lie_closed(2, vec![QMat::from_i64(&[&[0, 1], &[0, 0]])]).unwrap();
        assert!(i_subalgebra(&diag, &not_inside).is_err());
    }

    #[test]
    fn conjugation_equivariance_of_der() {
        let h3 = corpus::heisenberg3();
        let g = QMat::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let moved = h3.act(&g).unwrap();
        let der_moved = derivation_algebra(&moved);
        let der = derivation_algebra(&h3);
        let gi = g.inverse().unwrap();
        let conjugated: Vec<QMat> = der.basis().iter().map(|d| &(&g * d) * &gi).collect();
        let rebuilt = MatrixAlgebra::span(3, conjugated);
        assert_eq!(rebuilt.as_subspace(), der_moved.as_subspace());
    }

    #[test]
    fn i_of_stabilizer_acts_with_trivial_stabilizer() {
        // For h3 ⊕ R the subalgebra 𝔦 is nonzero; no nonzero element of it
        // may annihilate μ.
        let mu = corpus::heisenberg3().direct_sum(&corpus::abelian(1));
        let sol = pre_einstein(&mu).unwrap();
        let g = g_phi(&mu, &sol.phi);
        let der = derivation_algebra(&mu);
        let h = stabilizer_h(&g, &der);
        let i = i_subalgebra(&g, &h).unwrap();
        for b in i.basis() {
            assert!(!mu.infinitesimal_act(b).is_zero() || b.is_zero());
        }
    }
}
