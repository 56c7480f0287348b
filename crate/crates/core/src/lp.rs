//! Exact rational linear feasibility by Fourier–Motzkin elimination.
//!
//! Small systems only: the destabilizer search eliminates at most a handful
//! of torus coordinates against a few dozen weight inequalities.

use crate::rational::Q;
use num_traits::{One, Signed, Zero};

/// An inequality `Σ a_i x_i + b ≥ 0`, stored as `[a_1, …, a_r, b]`.
type Ineq = Vec<Q>;

fn normalize(row: &mut Ineq) {
    if let Some(lead) = row.iter().find(|c| !c.is_zero()) {
        let scale = lead.abs();
        for c in row.iter_mut() {
            *c = &*c / &scale;
        }
    }
}

fn eliminate_var(rows: &[Ineq], var: usize) -> Vec<Ineq> {
    let mut keep: Vec<Ineq> = Vec::new();
    let mut lower: Vec<Ineq> = Vec::new(); // coefficient > 0
    let mut upper: Vec<Ineq> = Vec::new(); // coefficient < 0
    for r in rows {
        if r[var].is_zero() {
            keep.push(r.clone());
        } else if r[var].is_positive() {
            lower.push(r.clone());
        } else {
            upper.push(r.clone());
        }
    }
    for lo in &lower {
        for up in &upper {
            let mut combined: Ineq = lo
                .iter()
                .zip(up)
                .map(|(l, u)| l * &-up[var].clone() + u * &lo[var])
                .collect();
            combined[var] = Q::zero();
            normalize(&mut combined);
            if !keep.contains(&combined) {
                keep.push(combined);
            }
        }
    }
    keep
}

/// Finds a rational point satisfying all inequalities, or `None`.
pub fn feasible_point(rows: &[Ineq], nvars: usize) -> Option<Vec<Q>> {
    let mut layers: Vec<Vec<Ineq>> = Vec::with_capacity(nvars + 1);
    let mut current: Vec<Ineq> = rows
        .iter()
        .map(|r| {
            let mut v = r.clone();
            normalize(&mut v);
            v
        })
        .collect();
    current.dedup();
    layers.push(current.clone());
    for var in (0..nvars).rev() {
        current = eliminate_var(&current, var);
        layers.push(current.clone());
    }
    // Only constants remain: check b ≥ 0.
    if current.iter().any(|r| r[nvars].is_negative()) {
        return None;
    }
    // Back-substitute from x_0 upward; `layers[nvars - var]` still contains
    // variable `var` as its highest live variable.
    let mut x = vec![Q::zero(); nvars];
    for var in 0..nvars {
        let layer = &layers[nvars - 1 - var];
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for r in layer {
            // variables above `var` were eliminated in this layer
            let coeff = &r[var];
            if coeff.is_zero() {
                continue;
            }
            let mut rest = r[nvars].clone();
            for (j, xv) in x.iter().enumerate().take(var) {
                rest += &r[j] * xv;
            }
            let bound = -rest / coeff.clone();
            if coeff.is_positive() {
                // x_var ≥ bound
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            }
        }
        x[var] = match (lower, upper) {
            (Some(l), Some(u)) => {
                debug_assert!(l <= u, "Fourier–Motzkin back-substitution out of order");
                (&l + &u) / (Q::one() + Q::one())
            }
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => Q::zero(),
        };
    }
    // Exact verification.
    for r in rows {
        let mut v = r[nvars].clone();
        for (j, xv) in x.iter().enumerate() {
            v += &r[j] * xv;
        }
        if v.is_negative() {
            return None;
        }
    }
    Some(x)
}

/// Searches the cone `{ξ : Wξ ≥ 0}` for a direction with `Wξ ≠ 0`; rows of
/// `w` are the weight vectors. Returns the coefficients `ξ` when found.
pub fn cone_positive_direction(w: &[Vec<Q>]) -> Option<Vec<Q>> {
    if w.is_empty() {
        return None;
    }
    let nvars = w[0].len();
    if nvars == 0 {
        return None;
    }
    let base: Vec<Ineq> = w
        .iter()
        .map(|row| {
            let mut v = row.clone();
            v.push(Q::zero());
            v
        })
        .collect();
    for target in 0..w.len() {
        // Ask for the target row value to reach 1; scaling makes this
        // equivalent to strict positivity on the cone.
        let mut rows = base.clone();
        let mut strict = w[target].clone();
        strict.push(-Q::one()); // w·ξ − 1 ≥ 0
        rows.push(strict);
        if let Some(x) = feasible_point(&rows, nvars) {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn w(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    fn verify(weights: &[Vec<Q>], x: &[Q]) {
        let mut any_positive = false;
        for row in weights {
            let v: Q = row.iter().zip(x).map(|(a, b)| a * b).sum();
            assert!(!v.is_negative());
            if v.is_positive() {
                any_positive = true;
            }
        }
        assert!(any_positive, "found direction acts trivially");
    }

    #[test]
    fn positive_orthant_weights() {
        let weights = w(&[&[1, 0], &[0, 1]]);
        let x = cone_positive_direction(&weights).unwrap();
        verify(&weights, &x);
    }

    #[test]
    fn opposite_weights_have_no_direction() {
        assert!(cone_positive_direction(&w(&[&[1], &[-1]])).is_none());
    }

    #[test]
    fn tilted_cone() {
        let weights = w(&[&[2, -1], &[-1, 2]]);
        let x = cone_positive_direction(&weights).unwrap();
        verify(&weights, &x);
    }

    #[test]
    fn zero_rows_only_is_not_a_destabilizer() {
        // Any ξ keeps Wξ = 0: the orbit is a fixed point, hence closed.
        assert!(cone_positive_direction(&w(&[&[0, 0]])).is_none());
    }

    #[test]
    fn kernel_direction_does_not_count() {
        // Cone is {ξ1 ≥ 0} × ℝ; ξ2-axis is in the kernel. A valid direction
        // must make the first row strictly positive.
        let weights = w(&[&[1, 0]]);
        let x = cone_positive_direction(&weights).unwrap();
        verify(&weights, &x);
    }

    #[test]
    fn infeasible_three_cycle() {
        // w1 + w2 + w3 = 0 with pairwise independent rows: cone is a line...
        let weights = w(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert!(cone_positive_direction(&weights).is_none());
    }

    #[test]
    fn feasible_point_respects_equality_encoded_as_two_rows() {
        // x = 1 encoded as x − 1 ≥ 0 and 1 − x ≥ 0
        let rows = vec![vec![qi(1), qi(-1)], vec![qi(-1), qi(1)]];
        let x = feasible_point(&rows, 1).unwrap();
        assert_eq!(x[0], qi(1));
    }
}
