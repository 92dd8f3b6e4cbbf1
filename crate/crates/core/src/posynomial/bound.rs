//! Minimization of the Bhattacharyya-like bound `2 P(xi)` over `0 < xi <= 1`.
//!
//! In `u = log2 xi` the objective `sum_t c_t 2^(t u)` is log-convex, and its
//! log-derivative is `ln 2` times the mean of `t` under the tilted weights
//! `c_t 2^(t u)`. The minimizer is the root of that mean, found by Newton
//! steps safeguarded with bisection on `u in [-64, 0]`.

use std::f64::consts::LN_2;

use serde::Serialize;

use super::LabelPosynomial;

const LOG2_XI_MIN: f64 = -64.0;
const MAX_ITERS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZStar {
    /// The minimized bound.
    pub value: f64,
    /// Minimizing point. Zero when the infimum is only approached as
    /// `xi -> 0`.
    pub xi_opt: f64,
    /// True when the infimum sits at the open end `xi -> 0`.
    pub open_boundary: bool,
}

struct Tilted {
    ln_total: f64,
    mean: f64,
    var: f64,
}

fn tilt(terms: &[(f64, f64)], u: f64) -> Tilted {
    let s = u * LN_2;
    let peak = terms
        .iter()
        .map(|&(t, ln_c)| ln_c + t * s)
        .fold(f64::NEG_INFINITY, f64::max);
    let (mut w0, mut w1, mut w2) = (0.0, 0.0, 0.0);
    for &(t, ln_c) in terms {
        let w = (ln_c + t * s - peak).exp();
        w0 += w;
        w1 += t * w;
        w2 += t * t * w;
    }
    let mean = w1 / w0;
    Tilted {
        ln_total: peak + w0.ln(),
        mean,
        var: (w2 / w0 - mean * mean).max(0.0),
    }
}

pub(super) fn minimize(p: &LabelPosynomial) -> ZStar {
    let t_max = p.t_max() as i64;
    let terms: Vec<(f64, f64)> = (-t_max..=t_max)
        .filter_map(|t| {
            let c = p.coeff(t);
            (c > 0.0).then(|| (t as f64, c.ln()))
        })
        .collect();
    let has_neg = terms.iter().any(|&(t, _)| t < 0.0);
    let has_pos = terms.iter().any(|&(t, _)| t > 0.0);
    let c0 = p.coeff(0);

    if !has_neg {
        return if has_pos {
            ZStar {
                value: 2.0 * c0,
                xi_opt: 0.0,
                open_boundary: true,
            }
        } else {
            ZStar {
                value: 2.0 * c0,
                xi_opt: 1.0,
                open_boundary: false,
            }
        };
    }
    let at = |u: f64| ZStar {
        value: 2.0 * tilt(&terms, u).ln_total.exp(),
        xi_opt: u.exp2(),
        open_boundary: false,
    };
    if !has_pos || tilt(&terms, 0.0).mean <= 0.0 {
        return ZStar {
            value: 2.0 * p.total(),
            xi_opt: 1.0,
            open_boundary: false,
        };
    }
    if tilt(&terms, LOG2_XI_MIN).mean >= 0.0 {
        return at(LOG2_XI_MIN);
    }

    let (mut lo, mut hi) = (LOG2_XI_MIN, 0.0);
    let mut u = -1.0;
    for _ in 0..MAX_ITERS {
        let state = tilt(&terms, u);
        if state.mean == 0.0 {
            break;
        }
        if state.mean > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let newton = u - state.mean / (LN_2 * state.var);
        let next = if state.var > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let settled = (next - u).abs() <= 1e-15 * u.abs().max(1.0);
        u = next;
        if settled || hi - lo <= f64::EPSILON * u.abs().max(1.0) {
            break;
        }
    }
    at(u)
}
