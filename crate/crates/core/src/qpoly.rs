//! Univariate polynomials over the rationals.
//!
//! Provides the exact subroutines the decision gates rely on: gcd and
//! squarefree parts, Sturm-sequence root counting, rational root extraction,
//! and arithmetic modulo a fixed polynomial (used by the Jordan–Chevalley
//! iteration).

use crate::qmat::QMat;
use crate::rational::{qi, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Polynomial with rational coefficients, stored low degree first with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly(Vec<Q>);

impl std::fmt::Debug for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Q::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![Q::one()])
    }

    pub fn x() -> Self {
        QPoly(vec![Q::zero(), Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        QPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_matrix(&self, m: &QMat) -> QMat {
        let n = m.rows();
        let mut acc = QMat::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = &(&acc * m) + &QMat::identity(n).scale(c);
        }
        acc
    }

    /// Computes `p(A)·v` without forming `p(A)`.
    pub fn eval_matrix_apply(&self, m: &QMat, v: &[Q]) -> Vec<Q> {
        let mut acc = vec![Q::zero(); v.len()];
        for c in self.0.iter().rev() {
            acc = m.apply(&acc);
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * qi(i as i64 + 1))
                .collect(),
        )
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.lead();
        QPoly::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        QPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = divisor.deg();
        let dl = divisor.lead();
        if rem.len() <= dd && !(dd == 0 && !rem.is_empty()) {
            if self.deg() < dd || self.is_zero() {
                return (QPoly::zero(), self.clone());
            }
        }
        let mut quot = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd || (dd == 0 && !rem.is_empty()) {
            let k = rem.len() - 1;
            if k < dd {
                break;
            }
            let f = rem[k].clone() / dl.clone();
            if !f.is_zero() {
                quot[k - dd] = f.clone();
                for (i, c) in divisor.0.iter().enumerate() {
                    rem[k - dd + i] -= &f * c;
                }
            }
            rem.pop();
            while rem.last().is_some_and(Q::is_zero) {
                rem.pop();
            }
            if rem.len() <= dd && dd != 0 {
                break;
            }
            if dd == 0 {
                // dividing by a constant consumes everything
                continue;
            }
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns `(g, u, v)` monic with `u·self + v·other = g`.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (QPoly::zero(), QPoly::zero(), QPoly::zero());
        }
        let l = r0.lead();
        let inv = Q::one() / l;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// `self / gcd(self, self')` — same roots, all simple.
    pub fn squarefree_part(&self) -> QPoly {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Number of distinct real roots in the interval `(lo, hi]`, where `None`
    /// stands for the corresponding infinity. Uses a Sturm sequence of the
    /// squarefree part.
    pub fn count_real_roots_in(&self, lo: Option<&Q>, hi: Option<&Q>) -> usize {
        let p = self.squarefree_part();
        if p.is_constant() {
            return 0;
        }
        let chain = sturm_chain(&p);
        let va = sign_variations(&chain, lo, true);
        let vb = sign_variations(&chain, hi, false);
        va.saturating_sub(vb)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        self.count_real_roots_in(None, None)
    }

    /// True when every complex root of the polynomial is real.
    pub fn all_roots_real(&self) -> bool {
        let p = self.squarefree_part();
        if p.is_constant() {
            return true;
        }
        self.count_real_roots() == p.deg()
    }

    /// Extracts the rational roots with multiplicities. Returns `None` when
    /// the divisor enumeration is abandoned (astronomical coefficients); the
    /// second component is true when the polynomial splits completely over ℚ.
    pub fn rational_roots(&self) -> Option<(Vec<(Q, usize)>, bool)> {
        if self.is_zero() || self.is_constant() {
            return Some((Vec::new(), true));
        }
        // Clear denominators to a primitive integer polynomial.
        let mut lcm = BigInt::one();
        for c in &self.0 {
            lcm = num_integer_lcm(&lcm, c.denom());
        }
        let int_coeffs: Vec<BigInt> =
            self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let lead = int_coeffs.last().unwrap().clone();
        let mut low_idx = 0;
        while int_coeffs[low_idx].is_zero() {
            low_idx += 1;
        }
        let constant = int_coeffs[low_idx].clone();

        let mut roots: Vec<(Q, usize)> = Vec::new();
        let mut rem = self.monic();
        if low_idx > 0 {
            // x^low_idx divides the polynomial
            let mult = low_idx;
            roots.push((Q::zero(), mult));
            let mut coeffs = rem.0[low_idx..].to_vec();
            while coeffs.last().is_some_and(Q::is_zero) {
                coeffs.pop();
            }
            rem = QPoly::new(coeffs);
        }
        let p_divs = bounded_divisors(&constant)?;
        let q_divs = bounded_divisors(&lead)?;
        let mut candidates: Vec<Q> = Vec::new();
        for p in &p_divs {
            for qd in &q_divs {
                let c = Q::new(p.clone(), qd.clone());
                if !candidates.contains(&c) {
                    candidates.push(c.clone());
                    let neg = -c;
                    if !candidates.contains(&neg) {
                        candidates.push(neg);
                    }
                }
            }
        }
        for cand in candidates {
            let mut mult = 0;
            while !rem.is_constant() && rem.eval(&cand).is_zero() {
                let lin = QPoly::new(vec![-cand.clone(), Q::one()]);
                rem = rem.divrem(&lin).0;
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }
        let splits = rem.is_constant();
        roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        Some((roots, splits))
    }

    /// Remainder of `self` modulo `m`.
    pub fn rem_mod(&self, m: &QPoly) -> QPoly {
        self.divrem(m).1
    }

    /// Composition `self(inner)` reduced modulo `m`.
    pub fn compose_mod(&self, inner: &QPoly, m: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(inner).rem_mod(m);
            acc = acc.add(&QPoly::constant(c.clone()));
        }
        acc.rem_mod(m)
    }
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_bigint::Sign;
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = num_integer_gcd(a, b);
    let l = a / &g * b;
    match l.sign() {
        Sign::Minus => -l,
        _ => l,
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Positive divisors of `n`, or `None` past the trial-division budget.
fn bounded_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let budget = BigInt::from(1_000_000u64);
    let mut divs = Vec::new();
    let mut d = BigInt::one();
    loop {
        if &d * &d > n {
            break;
        }
        if d > budget {
            return None;
        }
        if (&n % &d).is_zero() {
            divs.push(d.clone());
            let co = &n / &d;
            if co != d {
                divs.push(co);
            }
        }
        d += 1;
    }
    Some(divs)
}

fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(QPoly::new(r.0.iter().map(|c| -c.clone()).collect()));
    }
    chain
}

/// Sign variations of the chain at a point (or at ∓∞ when `point` is `None`;
/// `neg_infinity` selects which infinity).
fn sign_variations(chain: &[QPoly], point: Option<&Q>, neg_infinity: bool) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| match point {
            Some(x) => sign_of(&p.eval(x)),
            None => {
                if p.is_zero() {
                    0
                } else {
                    let l = sign_of(&p.lead());
                    if neg_infinity && p.deg() % 2 == 1 {
                        -l
                    } else {
                        l
                    }
                }
            }
        })
        .collect();
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
