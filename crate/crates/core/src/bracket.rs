//! Lie brackets as antisymmetric structure-constant tensors over ℚ.
//!
//! A bracket on `ℝⁿ` is the point `μ` of `Λ²(ℝⁿ)* ⊗ ℝⁿ` with coordinates
//! `c_{ij}^k = ⟨μ(e_i, e_j), e_k⟩`; only `i < j` is stored, antisymmetry is
//! structural. All arithmetic in this module is exact.

use crate::algebra::associative_hull;
use crate::qmat::{vec_ops, QMat, Subspace};
use crate::rational::{qi, Q};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BracketError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("the algebra is not solvable")]
    NotSolvable,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not closed under the bracket")]
    NotSubalgebra,
    #[error("Jacobi identity fails at triples {0:?} (0-based)")]
    JacobiViolation(Vec<(usize, usize, usize)>),
}

/// Structure-constant tensor of a (candidate) Lie bracket.
#[derive(Clone, PartialEq, Eq)]
pub struct BracketTensor {
    dim: usize,
    /// `(i, j, k) → c_{ij}^k` with `i < j`, zero entries omitted.
    coeffs: BTreeMap<(usize, usize, usize), Q>,
    validated: bool,
}

impl std::fmt::Debug for BracketTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BracketTensor(dim {}", self.dim)?;
        for ((i, j, k), c) in &self.coeffs {
            write!(f, ", [e{},e{}]→{}·e{}", i + 1, j + 1, c, k + 1)?;
        }
        write!(f, ")")
    }
}

impl BracketTensor {
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        BracketTensor { dim, coeffs: BTreeMap::new(), validated: true }
    }

    /// Sets `c_{ij}^k`; indices are 0-based, `i ≠ j`, and `c_{ji}^k = -c_{ij}^k`
    /// is maintained structurally. Clears the `validated` flag.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Q) {
        assert!(i < self.dim && j < self.dim && k < self.dim, "index out of range");
        assert!(i != j, "diagonal structure constants are zero by antisymmetry");
        self.validated = false;
        let (key, value) = if i < j { ((i, j, k), c) } else { ((j, i, k), -c) };
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    /// Builds a tensor from `(i, j, k, c)` entries, 0-based, `i < j`.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Q)]) -> Self {
        let mut t = BracketTensor::zero(dim);
        for (i, j, k, c) in entries {
            t.set(*i, *j, *k, c.clone());
        }
        t
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_i64_entries(dim: usize, entries: &[(usize, usize, usize, i64)]) -> Self {
        let mut t = BracketTensor::zero(dim);
        for &(i, j, k, c) in entries {
            t.set(i, j, k, qi(c));
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Q {
        if i == j {
            return Q::zero();
        }
        if i < j {
            self.coeffs.get(&(i, j, k)).cloned().unwrap_or_else(Q::zero)
        } else {
            -self.coeffs.get(&(j, i, k)).cloned().unwrap_or_else(Q::zero)
        }
    }

    /// Stored entries `(i, j, k, c)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Q)> {
        self.coeffs.iter().map(|(&(i, j, k), c)| (i, j, k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `μ(e_i, e_j)` as a coordinate vector.
    pub fn eval_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        if i == j {
            return v;
        }
        for k in 0..self.dim {
            v[k] = self.coeff(i, j, k);
        }
        v
    }

    /// `μ(x, y)` by bilinear expansion.
    pub fn eval(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Q::zero(); self.dim];
        for (&(i, j, k), c) in &self.coeffs {
            let w = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if !w.is_zero() {
                out[k] += c * &w;
            }
        }
        out
    }

    /// All Jacobi violations `(i, j, k)` with `i < j < k`, exact; empty means
    /// the tensor is a Lie bracket.
    pub fn validate_jacobi(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let bij = self.eval_basis(i, j);
                for k in j + 1..self.dim {
                    let mut total = self.eval(&bij, &basis_vec(self.dim, k));
                    let bjk = self.eval_basis(j, k);
                    total = vec_ops::add(&total, &self.eval(&bjk, &basis_vec(self.dim, i)));
                    let bki = self.eval_basis(k, i);
                    total = vec_ops::add(&total, &self.eval(&bki, &basis_vec(self.dim, j)));
                    if !vec_ops::is_zero(&total) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Marks the tensor validated, or reports the violating triples.
    pub fn validated(mut self) -> Result<Self, BracketError> {
        let bad = self.validate_jacobi();
        if bad.is_empty() {
            self.validated = true;
            Ok(self)
        } else {
            Err(BracketError::JacobiViolation(bad))
        }
    }

    /// Matrix of `ad X = μ(X, ·)` in the standard basis.
    pub fn ad(&self, x: &[Q]) -> QMat {
        let mut m = QMat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.eval(x, &basis_vec(self.dim, j));
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> QMat {
        self.ad(&basis_vec(self.dim, i))
    }

    /// Squared norm `Σ_{i<j} |μ(e_i,e_j)|²`.
    pub fn norm_sq(&self) -> Q {
        self.coeffs.values().map(|c| c * c).sum()
    }

    /// Inner product `Σ_{i<j} ⟨λ(e_i,e_j), μ(e_i,e_j)⟩`.
    pub fn inner(&self, other: &BracketTensor) -> Q {
        assert_eq!(self.dim, other.dim);
        let mut acc = Q::zero();
        for (&(i, j, k), c) in &self.coeffs {
            let oc = other.coeff(i, j, k);
            if !oc.is_zero() {
                acc += c * &oc;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> BracketTensor {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect()
        };
        BracketTensor { dim: self.dim, coeffs, validated: self.validated }
    }

    /// Span of all bracket values, echelonized: the commutator subalgebra.
    pub fn commutator_subalgebra(&self) -> Subspace {
        let mut vals = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                vals.push(self.eval_basis(i, j));
            }
        }
        Subspace::from_spanning(self.dim, vals)
    }

    /// Bracket of two subspaces, spanned by values on basis pairs.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vals = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                vals.push(self.eval(x, y));
            }
        }
        Subspace::from_spanning(self.dim, vals)
    }

    /// Structural classification flags with series step counts.
    pub fn classify(&self) -> AlgebraClass {
        let full = Subspace::full(self.dim);

        // Lower central series.
        let mut nilpotent = false;
        let mut nilpotency_steps = None;
        let mut lcs = self.commutator_subalgebra();
        let mut steps = 1;
        loop {
            if lcs.is_zero() {
                nilpotent = true;
                nilpotency_steps = Some(steps);
                break;
            }
            let next = self.bracket_subspaces(&full, &lcs);
            if next.dim() >= lcs.dim() {
                break;
            }
            lcs = next;
            steps += 1;
        }

        // Derived series.
        let mut solvable = false;
        let mut solvability_steps = None;
        let mut ds = self.commutator_subalgebra();
        let mut dsteps = 1;
        loop {
            if ds.is_zero() {
                solvable = true;
                solvability_steps = Some(dsteps);
                break;
            }
            let next = self.bracket_subspaces(&ds, &ds);
            if next.dim() >= ds.dim() {
                break;
            }
            ds = next;
            dsteps += 1;
        }

        let unimodular = (0..self.dim).all(|i| self.ad_basis(i).trace().is_zero());

        let completely_solvable = if nilpotent {
            true
        } else if !solvable {
            false
        } else {
            self.sample_vectors_for_cs()
                .iter()
                .all(|v| self.ad(v).char_poly().all_roots_real())
        };

        AlgebraClass {
            nilpotent,
            completely_solvable,
            solvable,
            unimodular,
            nilpotency_steps,
            solvability_steps,
        }
    }

    /// Basis vectors plus `2n+1` deterministic rational parameter points used
    /// by the real-spectrum sampling in the complete-solvability test.
    fn sample_vectors_for_cs(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        let mut out: Vec<Vec<Q>> = (0..n).map(|i| basis_vec(n, i)).collect();
        for s in 1..=(2 * n + 1) as i64 {
            let mut v = vec![Q::zero(); n];
            let mut p = qi(1);
            for entry in v.iter_mut() {
                *entry = p.clone();
                p *= qi(s);
            }
            out.push(v);
        }
        out
    }

    /// The maximal nilpotent ideal of a solvable algebra.
    ///
    /// Primary route: the kernel of the trace form `tr(ad X · ad Y)`,
    /// verified by checking every basis element is ad-nilpotent. Fallback:
    /// trace-orthogonality against the associative hull of `ad 𝔰`, which is
    /// exact for solvable algebras.
    pub fn nilradical(&self) -> Result<Subspace, BracketError> {
        if !self.classify().solvable {
            return Err(BracketError::NotSolvable);
        }
        let ads: Vec<QMat> = (0..self.dim).map(|i| self.ad_basis(i)).collect();
        let gram = QMat::from_fn(self.dim, self.dim, |i, j| ads[i].trace_product(&ads[j]));
        let primary = Subspace::from_spanning(self.dim, gram.kernel());
        if self.is_nilpotent_ideal(&primary) {
            return Ok(primary);
        }
        let hull = associative_hull(self.dim, &ads);
        let sys = QMat::from_fn(hull.len(), self.dim, |i, j| ads[j].trace_product(&hull[i]));
        let refined = Subspace::from_spanning(self.dim, sys.kernel());
        if self.is_nilpotent_ideal(&refined) {
            return Ok(refined);
        }
        Err(BracketError::NotSolvable)
    }

    fn is_nilpotent_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim as u32;
        s.basis().iter().all(|v| self.ad(v).pow(n).is_zero())
            && (0..self.dim).all(|i| {
                s.basis()
                    .iter()
                    .all(|v| s.contains(&self.eval(&basis_vec(self.dim, i), v)))
            })
            && s.contains_subspace(&self.commutator_subalgebra())
    }

    /// Basis change `(g·μ)(v, w) = g·μ(g⁻¹v, g⁻¹w)`.
    pub fn act(&self, g: &QMat) -> Result<BracketTensor, BracketError> {
        assert_eq!((g.rows(), g.cols()), (self.dim, self.dim));
        let h = g.inverse().ok_or(BracketError::SingularMatrix)?;
        let mut out = BracketTensor::zero(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let w = self.eval(&h.col(i), &h.col(j));
                let gw = g.apply(&w);
                for (k, c) in gw.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.set(i, j, k, c);
                    }
                }
            }
        }
        // The action of an invertible map preserves the Jacobi identity.
        out.validated = self.validated;
        Ok(out)
    }

    /// Infinitesimal action `(X·μ)(v,w) = Xμ(v,w) − μ(Xv,w) − μ(v,Xw)`;
    /// the result is a tensor, not necessarily a Lie bracket.
    pub fn infinitesimal_act(&self, x: &QMat) -> BracketTensor {
        assert_eq!((x.rows(), x.cols()), (self.dim, self.dim));
        let mut out = BracketTensor::zero(self.dim);
        out.validated = false;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let mut v = x.apply(&self.eval_basis(i, j));
                v = vec_ops::sub(&v, &self.eval(&x.col(i), &basis_vec(self.dim, j)));
                v = vec_ops::sub(&v, &self.eval(&basis_vec(self.dim, i), &x.col(j)));
                for (k, c) in v.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.set(i, j, k, c);
                    }
                }
            }
        }
        out
    }

    /// Block direct sum of two brackets.
    pub fn direct_sum(&self, other: &BracketTensor) -> BracketTensor {
        let n = self.dim + other.dim;
        let mut out = BracketTensor::zero(n);
        for (i, j, k, c) in self.entries() {
            out.set(i, j, k, c.clone());
        }
        let off = self.dim;
        for (i, j, k, c) in other.entries() {
            out.set(i + off, j + off, k + off, c.clone());
        }
        out.validated = self.validated && other.validated;
        out
    }

    /// Checks that two complementary subspaces are both ideals with vanishing
    /// mixed brackets, i.e. the algebra splits as their direct sum.
    pub fn verify_splitting(&self, p: &Subspace, q: &Subspace) -> Result<bool, BracketError> {
        if p.ambient() != self.dim || q.ambient() != self.dim {
            return Err(BracketError::DimensionMismatch(
                "splitting subspaces must live in the algebra".into(),
            ));
        }
        if p.dim() + q.dim() != self.dim || p.sum(q).dim() != self.dim {
            return Err(BracketError::DimensionMismatch(
                "subspaces are not complementary".into(),
            ));
        }
        let closed_in = |s: &Subspace| {
            s.basis().iter().enumerate().all(|(a, x)| {
                s.basis()[a + 1..].iter().all(|y| s.contains(&self.eval(x, y)))
            })
        };
        let mixed_zero = p.basis().iter().all(|x| {
            q.basis().iter().all(|y| vec_ops::is_zero(&self.eval(x, y)))
        });
        Ok(closed_in(p) && closed_in(q) && mixed_zero)
    }

    /// The induced bracket on a subalgebra, in the coordinates of its echelon
    /// basis. `None` when the subspace is not closed under the bracket.
    pub fn restrict_to(&self, s: &Subspace) -> Option<BracketTensor> {
        assert_eq!(s.ambient(), self.dim);
        if s.is_zero() {
            return None;
        }
        let k = s.dim();
        if k == 0 {
            return None;
        }
        let mut out = BracketTensor::zero(k);
        for a in 0..k {
            for b in a + 1..k {
                let w = self.eval(&s.basis()[a], &s.basis()[b]);
                let coords = s.coordinates(&w)?;
                for (c_idx, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.set(a, b, c_idx, c);
                    }
                }
            }
        }
        out.validated = self.validated;
        Some(out)
    }

    /// Matrix of `ad X` restricted to an invariant subspace, in the subspace
    /// basis. `None` when the subspace is not `ad X`-invariant.
    pub fn ad_restricted(&self, x: &[Q], s: &Subspace) -> Option<QMat> {
        let k = s.dim();
        let mut m = QMat::zeros(k, k);
        for j in 0..k {
            let image = self.eval(x, &s.basis()[j]);
            let coords = s.coordinates(&image)?;
            for i in 0..k {
                m[(i, j)] = coords[i].clone();
            }
        }
        Some(m)
    }
}

pub fn basis_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// Classification flags; the containments nilpotent ⟹ completely solvable
/// ⟹ solvable hold by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraClass {
    pub nilpotent: bool,
    pub completely_solvable: bool,
    pub solvable: bool,
    pub unimodular: bool,
    pub nilpotency_steps: Option<usize>,
    pub solvability_steps: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::q;

    #[test]
    fn heisenberg_and_abelian_satisfy_jacobi() {
        assert!(corpus::heisenberg3().validate_jacobi().is_empty());
        assert!(BracketTensor::zero(3).validate_jacobi().is_empty());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [e1,e2]=e3, [e1,e3]=e1 breaks Jacobi on (e1,e2,e3)
        let t = BracketTensor::from_i64_entries(3, &[(0, 1, 2, 1), (0, 2, 0, 1)]);
        let bad = t.validate_jacobi();
        assert!(bad.contains(&(0, 1, 2)));
        assert!(t.validated().is_err());
    }

    #[test]
    fn ad_matrices() {
        let h3 = corpus::heisenberg3();
        let ad1 = h3.ad_basis(0);
        let mut expected = QMat::zeros(3, 3);
        expected[(2, 1)] = qi(1);
        assert_eq!(ad1, expected);
        assert!(h3.ad(&vec![Q::zero(); 3]).is_zero());

        let hyp = corpus::hyperbolic_plane();
        let ad1 = hyp.ad_basis(0);
        let mut expected = QMat::zeros(2, 2);
        expected[(1, 1)] = qi(1);
        assert_eq!(ad1, expected);
    }

    #[test]
    fn classify_standard_examples() {
        let c = corpus::heisenberg3().classify();
        assert!(c.nilpotent && c.completely_solvable && c.solvable && c.unimodular);
        assert_eq!(c.nilpotency_steps, Some(2));

        let c = corpus::euclidean_e2().classify();
        assert!(!c.nilpotent && c.solvable && c.unimodular);
        assert!(!c.completely_solvable, "ad e1 has eigenvalues ±i");

        let c = corpus::hyperbolic_plane().classify();
        assert!(c.solvable && c.completely_solvable && !c.unimodular && !c.nilpotent);
    }

    #[test]
    fn commutator_subalgebras() {
        let h3 = corpus::heisenberg3();
        let c = h3.commutator_subalgebra();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&basis_vec(3, 2)));

        assert!(BracketTensor::zero(3).commutator_subalgebra().is_zero());

        let hyp = corpus::hyperbolic_plane();
        let c = hyp.commutator_subalgebra();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&basis_vec(2, 1)));
    }

    #[test]
    fn nilradicals() {
        let e2 = corpus::euclidean_e2();
        let nr = e2.nilradical().unwrap();
        assert_eq!(nr.dim(), 2);
        assert!(nr.contains(&basis_vec(3, 1)) && nr.contains(&basis_vec(3, 2)));

        let h3 = corpus::heisenberg3();
        assert_eq!(h3.nilradical().unwrap().dim(), 3);

        let hyp = corpus::hyperbolic_plane();
        let nr = hyp.nilradical().unwrap();
        assert_eq!(nr.dim(), 1);
        assert!(nr.contains(&basis_vec(2, 1)));
    }

    #[test]
    fn nilradical_contains_commutator() {
        for t in [corpus::euclidean_e2(), corpus::hyperbolic_plane(), corpus::sol3()] {
            let nr = t.nilradical().unwrap();
            assert!(nr.contains_subspace(&t.commutator_subalgebra()));
        }
    }

    #[test]
    fn act_examples() {
        let h3 = corpus::heisenberg3();
        assert_eq!(h3.act(&QMat::identity(3)).unwrap(), h3);

        let g = QMat::diagonal(&[qi(1), qi(1), qi(2)]);
        let scaled = h3.act(&g).unwrap();
        assert_eq!(scaled.coeff(0, 1, 2), qi(2));

        let mut p = QMat::zeros(3, 3);
        p[(0, 1)] = qi(1);
        p[(1, 0)] = qi(1);
        p[(2, 2)] = qi(1);
        let swapped = h3.act(&p).unwrap();
        assert_eq!(swapped.coeff(0, 1, 2), qi(-1));

        assert!(h3.act(&QMat::zeros(3, 3)).is_err());
    }

    #[test]
    fn act_composition_law() {
        let h3 = corpus::heisenberg3();
        let g = QMat::from_i64(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let h = QMat::from_i64(&[&[2, 0, 1], &[1, 1, 0], &[0, 0, 1]]);
        let lhs = h3.act(&h).unwrap().act(&g).unwrap();
        let rhs = h3.act(&(&g * &h)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn infinitesimal_act_examples() {
        let h3 = corpus::heisenberg3();
        // Identity acts as -μ on a 2-step bracket.
        let res = h3.infinitesimal_act(&QMat::identity(3));
        assert_eq!(res.coeff(0, 1, 2), qi(-1));
        // diag(1,1,2) is a derivation of h3.
        let d = QMat::diagonal(&[qi(1), qi(1), qi(2)]);
        assert!(h3.infinitesimal_act(&d).is_zero());
    }

    #[test]
    fn direct_sum_and_splitting() {
        let h3 = corpus::heisenberg3();
        let sum = h3.direct_sum(&BracketTensor::zero(1));
        assert_eq!(sum.dim(), 4);
        assert_eq!(sum.coeff(0, 1, 2), qi(1));
        assert_eq!(sum.entries().count(), 1);

        let p = Subspace::from_spanning(4, (0..3).map(|i| basis_vec(4, i)).collect());
        let q = Subspace::from_spanning(4, vec![basis_vec(4, 3)]);
        assert!(sum.verify_splitting(&p, &q).unwrap());

        // Rotate the complement into the center: still complementary but the
        // "ideal" test must fail because mixed pieces sit inside p wrongly.
        let bad = Subspace::from_spanning(4, vec![vec![qi(1), qi(0), qi(1), qi(1)]]);
        let p_bad = Subspace::from_spanning(
            4,
            vec![basis_vec(4, 0), basis_vec(4, 1), vec![qi(0), qi(0), qi(1), qi(-1)]],
        );
        // complementary but p_bad is not an ideal: [e1, e2] = e3 ∉ p_bad... it is?
        // e3 = ((0,0,1,-1) + (0,0,0,1)·?); check via the verifier instead:
        let ok = sum.verify_splitting(&p_bad, &bad).unwrap();
        assert!(!ok);

        let tiny = Subspace::from_spanning(4, vec![basis_vec(4, 0)]);
        assert!(sum.verify_splitting(&tiny, &bad).is_err());
    }

    #[test]
    fn restriction_to_commutator() {
        let e2 = corpus::euclidean_e2();
        let nr = e2.nilradical().unwrap();
        let restricted = e2.restrict_to(&nr).unwrap();
        assert!(restricted.is_zero()); // abelian nilradical
        let h3 = corpus::heisenberg3();
        let whole = Subspace::full(3);
        assert_eq!(h3.restrict_to(&whole).unwrap(), h3);
    }

    #[test]
    fn scaling_invariance_of_norm_convention() {
        let h3 = corpus::heisenberg3();
        assert_eq!(h3.norm_sq(), qi(1));
        assert_eq!(h3.scale(&q(1, 2)).norm_sq(), q(1, 4));
    }
}
