//! Label posynomials: the joint distribution of a min-sum label and the
//! transmitted bit, stored as the coefficients of `sum_t Q(t; 0) xi^t`.
//!
//! The `u = 1` half of the joint distribution is never stored; it is the
//! mirror image of the `u = 0` half (`Q(t; 1) = Q(-t; 0)`).
//!
//! Coefficients live in a dense array indexed `-t_max..=t_max`. Synthetic
//! distributions never leave `[-gamma 2^wt(i), gamma 2^wt(i)]`, so the dense
//! range is exactly the support bound and prefix sums are a single pass.

mod bound;
mod convolve;

pub use bound::ZStar;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::LabeledChannel;

/// Probability mass carried by the `u = 0` half of a joint distribution.
pub const HALF: f64 = 0.5;

/// Coefficients below this are flushed to zero.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

const MINUS_DRIFT_LIMIT: f64 = 1e-12;
const PLUS_DRIFT_LIMIT: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PosynomialError {
    #[error("coefficient array has length {len}, expected {expected} for t_max = {t_max}")]
    LengthMismatch {
        t_max: usize,
        len: usize,
        expected: usize,
    },
    #[error("coefficient at t = {t} is {value}, expected a finite non-negative number")]
    BadCoefficient { t: i64, value: f64 },
    #[error("exponent ranges differ: t_max {0} vs {1}")]
    RangeMismatch(usize, usize),
    #[error("evaluation point must be positive, got {0}")]
    NonPositivePoint(f64),
    #[error("bound point must lie in (0, 1], got {0}")]
    PointOutOfRange(f64),
    #[error("{transform} transform drifted from normalization by {drift:e}")]
    NormalizationDrift { transform: &'static str, drift: f64 },
    #[error("FFT squaring produced a negative coefficient {value:e} at t = {t}")]
    FftBreakdown { t: i64, value: f64 },
}

/// Dense posynomial over integer exponents `-t_max..=t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPosynomial")]
pub struct LabelPosynomial {
    t_max: usize,
    coeffs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPosynomial {
    t_max: usize,
    coeffs: Vec<f64>,
}

impl TryFrom<RawPosynomial> for LabelPosynomial {
    type Error = PosynomialError;

    fn try_from(raw: RawPosynomial) -> Result<Self, Self::Error> {
        LabelPosynomial::new(raw.t_max, raw.coeffs)
    }
}

/// The base distribution `Q_1^(0)(t; 0) = alpha[t] / 2`.
pub fn label_distribution(ch: &LabeledChannel) -> LabelPosynomial {
    LabelPosynomial {
        t_max: ch.gamma(),
        coeffs: ch.alpha_dense().iter().map(|a| a * HALF).collect(),
    }
}

impl LabelPosynomial {
    /// Builds a posynomial from `[c_{-t_max}, ..., c_{t_max}]`. Coefficients
    /// must be finite and non-negative; normalization is not checked because
    /// intermediate posynomials (above/below, pos/neg) are not distributions.
    pub fn new(t_max: usize, coeffs: Vec<f64>) -> Result<Self, PosynomialError> {
        let expected = 2 * t_max + 1;
        if coeffs.len() != expected {
            return Err(PosynomialError::LengthMismatch {
                t_max,
                len: coeffs.len(),
                expected,
            });
        }
        for (k, &c) in coeffs.iter().enumerate() {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(PosynomialError::BadCoefficient {
                    t: k as i64 - t_max as i64,
                    value: c,
                });
            }
        }
        Ok(Self { t_max, coeffs })
    }

    /// Builds from `(t, coefficient)` pairs; `t_max` is the largest `|t|`.
    pub fn from_terms(terms: &[(i64, f64)]) -> Result<Self, PosynomialError> {
        let t_max = terms
            .iter()
            .map(|(t, _)| t.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![0.0; 2 * t_max + 1];
        for &(t, c) in terms {
            coeffs[(t + t_max as i64) as usize] += c;
        }
        Self::new(t_max, coeffs)
    }

    fn zeros(t_max: usize) -> Self {
        Self {
            t_max,
            coeffs: vec![0.0; 2 * t_max + 1],
        }
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    /// Coefficients from `t = -t_max` up to `t = t_max`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `[xi^t] P`; zero outside the stored range.
    pub fn coeff(&self, t: i64) -> f64 {
        let m = self.t_max as i64;
        if t < -m || t > m {
            0.0
        } else {
            self.coeffs[(t + m) as usize]
        }
    }

    fn zero_index(&self) -> usize {
        self.t_max
    }

    /// Number of exponents carrying non-zero mass.
    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c > 0.0).count()
    }

    /// Sum of all coefficients, i.e. the value at `xi = 1`.
    pub fn total(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Re-expresses the posynomial on a wider exponent range.
    pub fn widened(&self, t_max: usize) -> Self {
        assert!(t_max >= self.t_max, "cannot narrow a posynomial");
        let mut out = Self::zeros(t_max);
        let off = t_max - self.t_max;
        out.coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }

    /// `sum_t c_t xi^t`, with powers built by repeated multiplication outward
    /// from `t = 0`.
    pub fn eval(&self, xi: f64) -> Result<f64, PosynomialError> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(PosynomialError::NonPositivePoint(xi));
        }
        let z = self.zero_index();
        let mut acc = self.coeffs[z];
        let mut power = 1.0;
        for &c in &self.coeffs[z + 1..] {
            power *= xi;
            acc += c * power;
        }
        let inv = 1.0 / xi;
        power = 1.0;
        for &c in self.coeffs[..z].iter().rev() {
            power *= inv;
            acc += c * power;
        }
        Ok(acc)
    }

    /// `P(1/xi)`: coefficients reversed about `t = 0`.
    pub fn mirror(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            t_max: self.t_max,
            coeffs,
        }
    }

    /// Keeps `t >= 0` and reflects it onto `t < 0`.
    pub fn pos_op(&self) -> Self {
        let z = self.zero_index();
        let mut out = self.clone();
        for k in 1..=z {
            out.coeffs[z - k] = self.coeffs[z + k];
        }
        out
    }

    /// Keeps `t <= 0` and reflects it onto `t > 0`.
    pub fn neg_op(&self) -> Self {
        let z = self.zero_index();
        let mut out = self.clone();
        for k in 1..=z {
            out.coeffs[z + k] = self.coeffs[z - k];
        }
        out
    }

    /// Element-wise product on identical exponent ranges.
    pub fn hadamard(&self, other: &Self) -> Result<Self, PosynomialError> {
        if self.t_max != other.t_max {
            return Err(PosynomialError::RangeMismatch(self.t_max, other.t_max));
        }
        Ok(Self {
            t_max: self.t_max,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// `[xi^t] above(P) = sum_{t' > t} c_{t'}` over the full dense range.
    pub fn above(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        let mut run = 0.0;
        for k in (0..self.coeffs.len()).rev() {
            coeffs[k] = run;
            run += self.coeffs[k];
        }
        Self {
            t_max: self.t_max,
            coeffs,
        }
    }

    /// `[xi^t] below(P) = sum_{t' < t} c_{t'}` over the full dense range.
    pub fn below(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        let mut run = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k] = run;
            run += c;
        }
        Self {
            t_max: self.t_max,
            coeffs,
        }
    }

    /// `a * self + b * other` on identical ranges.
    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        debug_assert_eq!(self.t_max, other.t_max);
        Self {
            t_max: self.t_max,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// Label distribution of the `+` channel: `2 P(xi)^2`, exponent range
    /// doubled.
    pub fn plus_transform(&self) -> Result<Self, PosynomialError> {
        let (mut coeffs, via_fft) = convolve::square(&self.coeffs);
        let t_max = 2 * self.t_max;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= 2.0;
            if *c < 0.0 {
                if via_fft && *c > -convolve::FFT_NOISE_FLOOR {
                    *c = 0.0;
                } else {
                    return Err(PosynomialError::FftBreakdown {
                        t: k as i64 - t_max as i64,
                        value: *c,
                    });
                }
            }
        }
        let mut out = Self { t_max, coeffs };
        out.renormalize("plus", PLUS_DRIFT_LIMIT / HALF)?;
        Ok(out)
    }

    /// Label distribution of the `-` channel under the min-sum check-node
    /// rule. Linear time: built from prefix sums, pos/neg reflection and
    /// Hadamard products.
    pub fn minus_transform(&self) -> Result<Self, PosynomialError> {
        let above = self.above();
        let below = self.below();
        // pairs with equal signs land on t > 0, opposite signs on t < 0
        let same = self.hadamard(&above.combine(2.0, self, 1.0).pos_op())?;
        let opposite = self
            .mirror()
            .hadamard(&below.combine(2.0, self, 1.0).neg_op())?;
        let mut out = same.combine(2.0, &opposite, 2.0);
        let z = out.zero_index();
        let c0 = self.coeffs[z];
        out.coeffs[z] -= 2.0 * c0 * c0;
        if out.coeffs[z] < 0.0 {
            out.coeffs[z] = 0.0;
        }
        out.renormalize("minus", MINUS_DRIFT_LIMIT)?;
        Ok(out)
    }

    fn renormalize(&mut self, transform: &'static str, limit: f64) -> Result<(), PosynomialError> {
        for c in self.coeffs.iter_mut() {
            if *c < UNDERFLOW_FLOOR {
                *c = 0.0;
            }
        }
        let total = self.total();
        let drift = total - HALF;
        if !(drift.abs() < limit) {
            return Err(PosynomialError::NormalizationDrift { transform, drift });
        }
        let scale = HALF / total;
        for c in self.coeffs.iter_mut() {
            *c *= scale;
        }
        Ok(())
    }

    /// Genie-aided error probability with ties decided as 0:
    /// `c_0 + 2 sum_{t<0} c_t`.
    pub fn error_probability(&self) -> f64 {
        let z = self.zero_index();
        let neg: f64 = self.coeffs[..z].iter().sum();
        (self.coeffs[z] + 2.0 * neg).clamp(0.0, 1.0)
    }

    /// The Bhattacharyya-like bound `2 P(xi0)`, valid for `0 < xi0 <= 1`.
    pub fn z_value(&self, xi0: f64) -> Result<f64, PosynomialError> {
        if !(xi0 > 0.0 && xi0 <= 1.0) {
            return Err(PosynomialError::PointOutOfRange(xi0));
        }
        Ok(2.0 * self.eval(xi0)?)
    }

    /// Tightest bound `min_{0 < xi <= 1} 2 P(xi)` and its minimizer.
    pub fn z_star(&self) -> ZStar {
        bound::minimize(self)
    }

    /// Mutual information in bits between the label and a uniform input bit.
    pub fn mutual_information(&self) -> f64 {
        let z = self.zero_index();
        let mut info = 0.0;
        for k in 0..self.coeffs.len() {
            let q0 = self.coeffs[k];
            let q1 = self.coeffs[2 * z - k];
            let m = q0 + q1;
            for q in [q0, q1] {
                if q > 0.0 {
                    info += q * (q / (HALF * m)).log2();
                }
            }
        }
        info.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{LabeledChannel, DEFAULT_AWGN_THRESHOLDS};

    fn bsc_base(p: f64) -> LabelPosynomial {
        label_distribution(&LabeledChannel::bsc(p).unwrap())
    }

    fn assert_terms(p: &LabelPosynomial, terms: &[(i64, f64)], tol: f64) {
        let t_max = p.t_max() as i64;
        for t in -t_max..=t_max {
            let want = terms.iter().find(|(s, _)| *s == t).map_or(0.0, |x| x.1);
            assert!(
                (p.coeff(t) - want).abs() <= tol,
                "t = {t}: got {}, want {want}",
                p.coeff(t)
            );
        }
    }

    /// Direct double sums over label pairs and the auxiliary bit.
    fn minus_by_pairs(p: &LabelPosynomial) -> Vec<f64> {
        let m = p.t_max() as i64;
        let q = |t: i64, u: u8| if u == 0 { p.coeff(t) } else { p.coeff(-t) };
        let mut out = vec![0.0; (2 * m + 1) as usize];
        for ta in -m..=m {
            for tb in -m..=m {
                let t = ta.signum() * tb.signum() * ta.abs().min(tb.abs());
                for u_next in 0..2u8 {
                    out[(t + m) as usize] += q(ta, u_next) * q(tb, u_next);
                }
            }
        }
        out
    }

    fn plus_by_pairs(p: &LabelPosynomial) -> Vec<f64> {
        let m = p.t_max() as i64;
        let q = |t: i64, u: u8| if u == 0 { p.coeff(t) } else { p.coeff(-t) };
        let mut out = vec![0.0; (4 * m + 1) as usize];
        for ta in -m..=m {
            for tb in -m..=m {
                for u_prev in 0..2u8 {
                    let t = if u_prev == 0 { ta + tb } else { tb - ta };
                    out[(t + 2 * m) as usize] += q(ta, u_prev) * q(tb, 0);
                }
            }
        }
        out
    }

    #[test]
    fn base_distribution_is_half_alpha() {
        assert_terms(&bsc_base(0.1), &[(1, 0.45), (-1, 0.05)], 0.0);
        assert_terms(&bsc_base(0.0), &[(1, 0.5)], 0.0);
        let awgn = label_distribution(
            &LabeledChannel::quantized_biawgn(1.0, DEFAULT_AWGN_THRESHOLDS).unwrap(),
        );
        assert!((awgn.coeff(4) - 0.210_370_145_280_448_5).abs() < 1e-12);
    }

    #[test]
    fn evaluation() {
        let p = bsc_base(0.1);
        assert!((p.eval(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((p.eval(1.0 / 3.0).unwrap() - 0.30).abs() < 1e-15);
        assert!(p.eval(0.0).is_err());
        assert!(p.eval(-1.0).is_err());
    }

    #[test]
    fn mirror_and_reflections() {
        let p = bsc_base(0.1);
        assert_terms(&p.mirror(), &[(1, 0.05), (-1, 0.45)], 0.0);
        assert_eq!(p.mirror().mirror(), p);
        let sym =
            LabelPosynomial::from_terms(&[(2, 0.1), (-2, 0.1), (1, 0.15), (-1, 0.15)]).unwrap();
        assert_eq!(sym.mirror(), sym);

        let (a, b, c) = (0.3, 0.15, 0.05);
        let q = LabelPosynomial::from_terms(&[(1, a), (0, b), (-1, c)]).unwrap();
        assert_terms(&q.pos_op(), &[(1, a), (0, b), (-1, a)], 0.0);
        assert_terms(&q.neg_op(), &[(1, c), (0, b), (-1, c)], 0.0);

        let x = LabelPosynomial::from_terms(&[(1, 2.0), (-1, 3.0)]).unwrap();
        let y = LabelPosynomial::from_terms(&[(1, 5.0), (-1, 7.0)]).unwrap();
        assert_terms(&x.hadamard(&y).unwrap(), &[(1, 10.0), (-1, 21.0)], 0.0);
        assert!(x.hadamard(&x.widened(2)).is_err());
    }

    #[test]
    fn above_and_below() {
        let p = LabelPosynomial::from_terms(&[(1, 0.45), (0, 0.0), (-1, 0.05)]).unwrap();
        assert_terms(&p.above(), &[(-1, 0.45), (0, 0.45), (1, 0.0)], 1e-15);
        assert_terms(&p.below(), &[(-1, 0.0), (0, 0.05), (1, 0.05)], 1e-15);
        let awgn = label_distribution(
            &LabeledChannel::quantized_biawgn(0.7, DEFAULT_AWGN_THRESHOLDS).unwrap(),
        );
        assert_eq!(awgn.above().coeff(4), 0.0);
        assert_eq!(awgn.below().coeff(-4), 0.0);
    }

    #[test]
    fn transforms_of_bsc() {
        let p = bsc_base(0.1);
        assert_terms(
            &p.minus_transform().unwrap(),
            &[(1, 0.41), (-1, 0.09)],
            1e-12,
        );
        assert_terms(
            &p.plus_transform().unwrap(),
            &[(2, 0.405), (0, 0.09), (-2, 0.005)],
            1e-12,
        );

        let clean = bsc_base(0.0);
        assert_terms(&clean.minus_transform().unwrap(), &[(1, 0.5)], 0.0);
        assert_terms(&clean.plus_transform().unwrap(), &[(2, 0.5)], 0.0);
        assert!((p.plus_transform().unwrap().total() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn minus_error_probability_matches_enumeration() {
        for &p in &[0.05, 0.1, 0.2] {
            let pe = bsc_base(p).minus_transform().unwrap().error_probability();
            assert!((pe - 2.0 * p * (1.0 - p)).abs() < 1e-12);
        }
    }

    #[test]
    fn transforms_match_pair_sums_on_awgn() {
        for &sigma in &[0.5, 0.9, 1.4] {
            let base = label_distribution(
                &LabeledChannel::quantized_biawgn(sigma, DEFAULT_AWGN_THRESHOLDS).unwrap(),
            );
            for p in [base.clone(), base.minus_transform().unwrap()] {
                let minus = p.minus_transform().unwrap();
                for (got, want) in minus.coeffs().iter().zip(minus_by_pairs(&p)) {
                    assert!((got - want).abs() < 1e-12);
                }
                let plus = p.plus_transform().unwrap();
                for (got, want) in plus.coeffs().iter().zip(plus_by_pairs(&p)) {
                    assert!((got - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn error_probabilities() {
        let p = bsc_base(0.1);
        assert!((p.error_probability() - 0.1).abs() < 1e-15);
        assert!((p.plus_transform().unwrap().error_probability() - 0.1).abs() < 1e-12);
        assert_eq!(bsc_base(0.0).error_probability(), 0.0);
    }

    #[test]
    fn bound_values() {
        let p = bsc_base(0.1);
        let root_half = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.z_value(root_half).unwrap() - 0.777_817_459_305_202_2).abs() < 1e-12);
        assert!((p.z_value(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p.z_value(1.0 / 3.0).unwrap() - 0.6).abs() < 1e-15);
        assert!(p.z_value(0.0).is_err());
        assert!(p.z_value(1.5).is_err());
    }

    #[test]
    fn mutual_information_values() {
        assert!((bsc_base(0.1).mutual_information() - 0.531_004_406_410_718_8).abs() < 1e-12);
        assert_eq!(bsc_base(0.5).mutual_information(), 0.0);
        assert!((bsc_base(0.0).mutual_information() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            LabelPosynomial::new(1, vec![0.1, 0.2]),
            Err(PosynomialError::LengthMismatch { .. })
        ));
        assert!(matches!(
            LabelPosynomial::new(1, vec![0.1, -0.2, 0.6]),
            Err(PosynomialError::BadCoefficient { t: 0, .. })
        ));
    }

    #[test]
    fn json_layout() {
        let p = bsc_base(0.1);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"t_max":1,"coeffs":[0.05,0.0,0.45]}"#);
        let back: LabelPosynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LabelPosynomial>(r#"{"t_max":1,"coeffs":[0.5]}"#).is_err());
    }
}
