//! Subalgebras of `gl(n, ℚ)` and the exact matrix-algebra decision routines:
//! radicals, reductivity, centralizers, semisimplicity, Jordan–Chevalley
//! decomposition, simultaneous diagonalization, and the purely-imaginary
//! spectrum certificate.

use crate::qmat::{vec_ops, QMat, Subspace};
use crate::qpoly::QPoly;
use crate::rational::Q;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("radical verification failed: trace-form kernel is not a solvable ideal")]
    RadicalVerificationFailed,
    #[error("matrices are not simultaneously diagonalizable over ℚ: {0}")]
    NotSimultaneouslyDiagonalizable(String),
    #[error("basis does not span a Lie-closed subalgebra")]
    NotLieClosed,
}

/// A subalgebra of `gl(n, ℚ)` given by a linearly independent basis of
/// matrices, echelonized as `n²`-vectors so equality is syntactic.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixAlgebra {
    n: usize,
    basis: Vec<QMat>,
    span: Subspace,
    lie_closed: bool,
}

impl std::fmt::Debug for MatrixAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MatrixAlgebra(n={}, dim={}, lie_closed={})", self.n, self.dim(), self.lie_closed)
    }
}

impl MatrixAlgebra {
    /// Builds the span of the given matrices without checking Lie closure.
    pub fn span(n: usize, mats: Vec<QMat>) -> Self {
        for m in &mats {
            assert_eq!((m.rows(), m.cols()), (n, n));
        }
        let span = Subspace::from_spanning(n * n, mats.iter().map(QMat::flatten).collect());
        let basis = span
            .basis()
            .iter()
            .map(|v| QMat::from_flat(n, n, v.clone()))
            .collect();
        MatrixAlgebra { n, basis, span, lie_closed: false }
    }

    /// Builds the span and verifies closure under the commutator.
    pub fn lie_closed(n: usize, mats: Vec<QMat>) -> Result<Self, AlgebraError> {
        let mut a = MatrixAlgebra::span(n, mats);
        if !a.check_lie_closed() {
            return Err(AlgebraError::NotLieClosed);
        }
        a.lie_closed = true;
        Ok(a)
    }

    pub fn zero(n: usize) -> Self {
        MatrixAlgebra {
            n,
            basis: Vec::new(),
            span: Subspace::zero(n * n),
            lie_closed: true,
        }
    }

    /// All of `gl(n)`.
    pub fn gl(n: usize) -> Self {
        let mut mats = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut m = QMat::zeros(n, n);
                m[(i, j)] = Q::one();
                mats.push(m);
            }
        }
        let mut a = MatrixAlgebra::span(n, mats);
        a.lie_closed = true;
        a
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMat] {
        &self.basis
    }

    pub fn as_subspace(&self) -> &Subspace {
        &self.span
    }

    pub fn is_lie_closed_flag(&self) -> bool {
        self.lie_closed
    }

    pub fn contains(&self, m: &QMat) -> bool {
        self.span.contains(&m.flatten())
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn check_lie_closed(&self) -> bool {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if !self.contains(&a.commutator(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Reconstructs an element from coefficients on the echelon basis.
    pub fn element(&self, coeffs: &[Q]) -> QMat {
        assert_eq!(coeffs.len(), self.dim());
        let mut m = QMat::zeros(self.n, self.n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            m = &m + &b.scale(c);
        }
        m
    }

    pub fn intersect(&self, other: &MatrixAlgebra) -> MatrixAlgebra {
        assert_eq!(self.n, other.n);
        let span = self.span.intersect(&other.span);
        let basis: Vec<QMat> = span
            .basis()
            .iter()
            .map(|v| QMat::from_flat(self.n, self.n, v.clone()))
            .collect();
        let mut a = MatrixAlgebra { n: self.n, basis, span, lie_closed: false };
        a.lie_closed = a.check_lie_closed();
        a
    }

    /// Derived algebra `[A, A]` as a subalgebra span.
    pub fn derived(&self) -> MatrixAlgebra {
        let mut mats = Vec::new();
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                mats.push(a.commutator(b));
            }
        }
        let mut d = MatrixAlgebra::span(self.n, mats);
        d.lie_closed = d.check_lie_closed();
        d
    }

    pub fn is_abelian(&self) -> bool {
        self.derived().is_zero()
    }

    /// Derived series reaches zero.
    pub fn is_solvable(&self) -> bool {
        let mut cur = self.clone();
        loop {
            if cur.is_zero() {
                return true;
            }
            let next = cur.derived();
            if next.dim() == cur.dim() {
                return false;
            }
            cur = next;
        }
    }

    /// Checks `[self, other] ⊆ other`.
    pub fn normalizes(&self, other: &MatrixAlgebra) -> bool {
        self.basis.iter().all(|a| {
            other.basis.iter().all(|b| other.contains(&a.commutator(b)))
        })
    }

    /// The maximal solvable ideal, computed as the trace-form orthogonal of
    /// the derived algebra and verified to be a solvable ideal.
    pub fn radical(&self) -> Result<MatrixAlgebra, AlgebraError> {
        let derived = self.derived();
        let candidate = self.trace_orthogonal_of(&derived);
        if candidate.is_solvable() && self.normalizes(&candidate) {
            return Ok(candidate);
        }
        // Refinement: orthogonality against the associative hull of the
        // derived algebra sharpens the kernel; see `associative_hull`.
        let hull = associative_hull(self.n, derived.basis());
        let refined = self.trace_orthogonal_of_mats(&hull);
        if refined.is_solvable() && self.normalizes(&refined) {
            return Ok(refined);
        }
        Err(AlgebraError::RadicalVerificationFailed)
    }

    /// `{X ∈ self : tr(X·Y) = 0 for every Y in other}`.
    fn trace_orthogonal_of(&self, other: &MatrixAlgebra) -> MatrixAlgebra {
        self.trace_orthogonal_of_mats(other.basis())
    }

    fn trace_orthogonal_of_mats(&self, mats: &[QMat]) -> MatrixAlgebra {
        if mats.is_empty() || self.is_zero() {
            return self.clone();
        }
        let rows = mats.len();
        let sys = QMat::from_fn(rows, self.dim(), |i, j| self.basis[j].trace_product(&mats[i]));
        let kernel = sys.kernel();
        let basis = kernel.iter().map(|k| self.element(k)).collect();
        let mut a = MatrixAlgebra::span(self.n, basis);
        a.lie_closed = a.check_lie_closed();
        a
    }

    /// Reductivity test: the radical must be abelian and consist of
    /// semisimple elements. On failure returns a nonzero nilpotent element
    /// of the radical as witness.
    pub fn is_reductive(&self) -> Result<ReductivityReport, AlgebraError> {
        let rad = self.radical()?;
        if !rad.is_abelian() {
            // Any nonzero commutator of radical elements acts nilpotently.
            let witness = rad
                .derived()
                .basis()
                .first()
                .cloned()
                .expect("non-abelian algebra has a nonzero commutator");
            return Ok(ReductivityReport { reductive: false, radical: rad, nilpotent_witness: Some(witness) });
        }
        for b in rad.basis() {
            let (_, n) = jordan_chevalley(b);
            if !n.is_zero() {
                return Ok(ReductivityReport { reductive: false, radical: rad.clone(), nilpotent_witness: Some(n) });
            }
        }
        Ok(ReductivityReport { reductive: true, radical: rad, nilpotent_witness: None })
    }

    /// `{X ∈ self : [X, s] = 0 for all s in others}`.
    pub fn centralizer(&self, others: &[QMat]) -> MatrixAlgebra {
        if self.is_zero() || others.is_empty() {
            return self.clone();
        }
        let n2 = self.n * self.n;
        let rows = others.len() * n2;
        let sys = QMat::from_fn(rows, self.dim(), |i, j| {
            let (s_idx, coord) = (i / n2, i % n2);
            self.basis[j].commutator(&others[s_idx]).flatten()[coord].clone()
        });
        let kernel = sys.kernel();
        let basis = kernel.iter().map(|k| self.element(k)).collect();
        let mut a = MatrixAlgebra::span(self.n, basis);
        a.lie_closed = a.check_lie_closed();
        a
    }

    /// The symmetric elements of the span, as a list of matrices.
    pub fn symmetric_part(&self) -> Vec<QMat> {
        if self.is_zero() {
            return Vec::new();
        }
        let n2 = self.n * self.n;
        // X = Σ c_j b_j with X = Xᵀ: linear system on the coefficients.
        let sys = QMat::from_fn(n2, self.dim(), |i, j| {
            let diff = &self.basis[j] - &self.basis[j].transpose();
            diff.flatten()[i].clone()
        });
        sys.kernel().iter().map(|k| self.element(k)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ReductivityReport {
    pub reductive: bool,
    pub radical: MatrixAlgebra,
    pub nilpotent_witness: Option<QMat>,
}

/// Span of all products of one or more factors drawn from `gens`, closed
/// under multiplication.
pub fn associative_hull(n: usize, gens: &[QMat]) -> Vec<QMat> {
    let mut span = Subspace::zero(n * n);
    let mut basis: Vec<QMat> = Vec::new();
    let mut frontier: Vec<QMat> = Vec::new();
    for g in gens {
        if !span.contains(&g.flatten()) {
            span = span.sum(&Subspace::from_spanning(n * n, vec![g.flatten()]));
            basis.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while let Some(f) = frontier.pop() {
        for g in gens {
            for prod in [&f * g, g * &f] {
                if !span.contains(&prod.flatten()) {
                    span = span.sum(&Subspace::from_spanning(n * n, vec![prod.flatten()]));
                    basis.push(prod.clone());
                    frontier.push(prod);
                }
            }
        }
    }
    basis
}

/// Semisimplicity certificate for a single matrix.
#[derive(Debug, Clone)]
pub struct SemisimplicityReport {
    pub is_semisimple: bool,
    pub minimal_polynomial: QPoly,
    /// Eigenvalues with algebraic multiplicities, populated when the minimal
    /// polynomial splits over ℚ.
    pub eigenvalues_rational: Option<Vec<(Q, usize)>>,
    /// Whether the minimal polynomial splits over ℚ; `None` when the divisor
    /// enumeration in the root search was abandoned.
    pub splits_over_q: Option<bool>,
    /// True when every eigenvalue is real, decided exactly.
    pub all_eigenvalues_real: bool,
}

/// Semisimple ⟺ squarefree minimal polynomial; rational eigenvalues are
/// extracted when the minimal polynomial splits over ℚ.
pub fn is_semisimple(m: &QMat) -> SemisimplicityReport {
    let min = m.min_poly();
    let semisimple = min.is_squarefree();
    let all_real = min.all_roots_real();
    let (eigenvalues, splits) = match min.rational_roots() {
        Some((roots, true)) => {
            // Multiplicities come from the characteristic polynomial.
            let char_p = m.char_poly();
            let mut out = Vec::new();
            for (r, _) in &roots {
                let lin = QPoly::new(vec![-r.clone(), Q::one()]);
                let mut p = char_p.clone();
                let mut mult = 0;
                loop {
                    let (quot, rem) = p.divrem(&lin);
                    if rem.is_zero() {
                        mult += 1;
                        p = quot;
                    } else {
                        break;
                    }
                }
                out.push((r.clone(), mult));
            }
            (Some(out), Some(true))
        }
        Some((_, false)) => (None, Some(false)),
        None => (None, None),
    };
    SemisimplicityReport {
        is_semisimple: semisimple,
        minimal_polynomial: min,
        eigenvalues_rational: eigenvalues,
        splits_over_q: splits,
        all_eigenvalues_real: all_real,
    }
}

/// True iff every eigenvalue of `m` has zero real part, decided exactly.
///
/// The characteristic polynomial is deflated by its power of `x`; the rest
/// must be a polynomial in `x²` whose preimage has only real non-positive
/// roots (Sturm count). That shape characterizes spectra contained in `iℝ`.
pub fn has_only_imaginary_eigenvalues(m: &QMat) -> bool {
    let char_p = m.char_poly();
    let coeffs = char_p.coeffs();
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let rest: Vec<Q> = coeffs[low..].to_vec();
    if rest.len() == 1 {
        return true; // char = x^n, all eigenvalues zero
    }
    // Must be even in x.
    if rest.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return false;
    }
    let q_coeffs: Vec<Q> = rest.iter().step_by(2).cloned().collect();
    let q_poly = QPoly::new(q_coeffs).squarefree_part();
    let d = q_poly.deg();
    // All roots of q real and < 0 (q(0) ≠ 0 since the power of x was stripped).
    q_poly.count_real_roots() == d && q_poly.count_real_roots_in(None, Some(&Q::zero())) == d
}

/// True iff every eigenvalue of `m` is real, decided exactly via Sturm.
pub fn has_only_real_eigenvalues(m: &QMat) -> bool {
    m.char_poly().all_roots_real()
}

/// Jordan–Chevalley decomposition `m = s + n` over ℚ with `s` semisimple,
/// `n` nilpotent, both polynomials in `m`.
pub fn jordan_chevalley(m: &QMat) -> (QMat, QMat) {
    let min = m.min_poly();
    let f = min.squarefree_part();
    if f == min.monic() {
        return (m.clone(), QMat::zeros(m.rows(), m.cols()));
    }
    // Newton iteration in ℚ[x]/(min): z ← z − f(z)·u(z), u·f' ≡ 1 (mod f).
    let (g, u, _) = f.derivative().xgcd(&f);
    assert!(g.deg() == 0 && !g.is_zero(), "squarefree part must be separable");
    let mut z = QPoly::x();
    let mut guard = 0;
    loop {
        let fz = f.compose_mod(&z, &min);
        if fz.is_zero() {
            break;
        }
        let uz = u.compose_mod(&z, &min);
        z = z.sub(&fz.mul(&uz).rem_mod(&min)).rem_mod(&min);
        guard += 1;
        assert!(guard <= 2 * min.deg() + 4, "Jordan–Chevalley iteration failed to converge");
    }
    let s = z.eval_matrix(m);
    let n = m - &s;
    (s, n)
}

/// Simultaneously diagonalizes pairwise commuting semisimple matrices whose
/// eigenvalues are rational. Returns `(g, weights)` with `g⁻¹·s·g` diagonal
/// for every input `s`; `weights[l]` lists, for the `l`-th column of `g`, the
/// eigenvalue of each input matrix on that column.
pub fn simultaneous_diagonalize(
    mats: &[QMat],
) -> Result<(QMat, Vec<Vec<Q>>), AlgebraError> {
    assert!(!mats.is_empty());
    let n = mats[0].rows();
    for (i, a) in mats.iter().enumerate() {
        assert!(a.is_square() && a.rows() == n);
        for b in &mats[i + 1..] {
            if !a.commutator(b).is_zero() {
                return Err(AlgebraError::NotSimultaneouslyDiagonalizable(
                    "matrices do not commute".into(),
                ));
            }
        }
    }
    // Blocks of joint eigenvectors, refined one matrix at a time.
    let mut blocks: Vec<Vec<Vec<Q>>> = vec![(0..n)
        .map(|i| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        })
        .collect()];
    for m in mats {
        let mut next = Vec::new();
        for block in blocks {
            let k = block.len();
            // Matrix of m restricted to the block, in block coordinates.
            let cols_mat = QMat::from_fn(n, k, |i, j| block[j][i].clone());
            let mut restr = QMat::zeros(k, k);
            for j in 0..k {
                let image = m.apply(&block[j]);
                let coords = cols_mat.solve(&image).ok_or_else(|| {
                    AlgebraError::NotSimultaneouslyDiagonalizable(
                        "matrix does not preserve a joint eigenspace".into(),
                    )
                })?;
                for i in 0..k {
                    restr[(i, j)] = coords[i].clone();
                }
            }
            let min = restr.min_poly();
            let Some((roots, splits)) = min.rational_roots() else {
                return Err(AlgebraError::NotSimultaneouslyDiagonalizable(
                    "eigenvalue extraction exceeded budget".into(),
                ));
            };
            if !splits {
                return Err(AlgebraError::NotSimultaneouslyDiagonalizable(
                    "irrational eigenvalues".into(),
                ));
            }
            let mut captured = 0;
            for (lambda, _) in &roots {
                let shifted = &restr - &QMat::identity(k).scale(lambda);
                for kv in shifted.kernel() {
                    // Back to ambient coordinates.
                    let mut v = vec![Q::zero(); n];
                    for (j, c) in kv.iter().enumerate() {
                        v = vec_ops::add(&v, &vec_ops::scale(&block[j], c));
                    }
                    next.push(vec![v]);
                    captured += 1;
                }
            }
            if captured != k {
                return Err(AlgebraError::NotSimultaneouslyDiagonalizable(
                    "matrix is not semisimple on a joint block".into(),
                ));
            }
            // Merge the 1-vector blocks for this block back into eigenspace
            // groups per eigenvalue so later matrices see whole eigenspaces.
            let merged = regroup_by_eigenvalue(&next, m);
            next = merged;
        }
        blocks = next;
    }
    let columns: Vec<Vec<Q>> = blocks.into_iter().flatten().collect();
    let g = QMat::from_fn(n, n, |i, j| columns[j][i].clone());
    let g_inv = g
        .inverse()
        .ok_or_else(|| AlgebraError::NotSimultaneouslyDiagonalizable("degenerate eigenbasis".into()))?;
    let mut weights = vec![Vec::with_capacity(mats.len()); n];
    for m in mats {
        let d = &(&g_inv * m) * &g;
        for l in 0..n {
            for j in 0..n {
                if l != j {
                    assert!(d[(l, j)].is_zero(), "diagonalization failed off-diagonal");
                }
            }
            weights[l].push(d[(l, l)].clone());
        }
    }
    Ok((g, weights))
}

/// Groups single-vector blocks by their eigenvalue under `m` so each group is
/// a full joint eigenspace (needed so later matrices restrict cleanly).
fn regroup_by_eigenvalue(singles: &[Vec<Vec<Q>>], m: &QMat) -> Vec<Vec<Vec<Q>>> {
    let mut groups: Vec<(Q, Vec<Vec<Q>>)> = Vec::new();
    for block in singles {
        for v in block {
            let image = m.apply(v);
            let lead = v.iter().position(|x| !x.is_zero()).expect("zero eigenvector");
            let lambda = &image[lead] / &v[lead];
            match groups.iter_mut().find(|(l, _)| *l == lambda) {
                Some((_, vs)) => vs.push(v.clone()),
                None => groups.push((lambda, vec![v.clone()])),
            }
        }
    }
    groups.into_iter().map(|(_, vs)| vs).collect()
}
