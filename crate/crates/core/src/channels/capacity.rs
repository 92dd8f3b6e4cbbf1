//! Reference capacities for the unlabeled channel families.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::sync::OnceLock;

use super::ChannelError;

const HERMITE_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    Bsc,
    /// BPSK over Gaussian noise with unquantized output.
    BiAwgn,
    /// Real Gaussian channel with unit input power.
    Awgn,
}

impl std::str::FromStr for ReferenceKind {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bsc" => Ok(Self::Bsc),
            "biawgn-unquantized" | "biawgn" => Ok(Self::BiAwgn),
            "awgn" => Ok(Self::Awgn),
            other => Err(ChannelError::Config(format!(
                "unknown reference kind `{other}`"
            ))),
        }
    }
}

/// `h2(p)` in bits with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Capacity in bits per channel use. `param` is the crossover probability for
/// the BSC and the noise standard deviation otherwise.
pub fn reference_capacity(kind: ReferenceKind, param: f64) -> Result<f64, ChannelError> {
    match kind {
        ReferenceKind::Bsc => {
            if !(0.0..=1.0).contains(&param) {
                return Err(ChannelError::CrossoverOutOfRange(param));
            }
            Ok(1.0 - binary_entropy(param))
        }
        ReferenceKind::Awgn => {
            check_sigma(param)?;
            Ok(0.5 * (1.0 + 1.0 / (param * param)).log2())
        }
        ReferenceKind::BiAwgn => {
            check_sigma(param)?;
            Ok(biawgn_capacity(param))
        }
    }
}

/// Evaluates [`reference_capacity`] over a parameter grid.
pub fn reference_capacities(
    kind: ReferenceKind,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>, ChannelError> {
    if grid.is_empty() {
        return Err(ChannelError::Config("empty parameter grid".into()));
    }
    grid.iter()
        .map(|&x| reference_capacity(kind, x).map(|c| (x, c)))
        .collect()
}

fn check_sigma(sigma: f64) -> Result<(), ChannelError> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::NonPositiveSigma(sigma))
    }
}

/// `1 - E[log2(1 + exp(-2Y/sigma^2))]` with `Y ~ N(1, sigma^2)`.
fn biawgn_capacity(sigma: f64) -> f64 {
    let (nodes, weights) = hermite_rule();
    let s2 = sigma * sigma;
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        let y = 1.0 + SQRT_2 * sigma * x;
        acc += w * softplus(-2.0 * y / s2);
    }
    1.0 - acc / (PI.sqrt() * LN_2)
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn hermite_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_hermite(HERMITE_ORDER))
}

/// Nodes and weights for `int exp(-x^2) f(x) dx`, by Newton iteration on the
/// orthonormal Hermite recurrence.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-0.16667),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_moments() {
        let (x, w) = gauss_hermite(HERMITE_ORDER);
        let m0: f64 = w.iter().sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-12);
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 3.0 * PI.sqrt() / 4.0).abs() < 1e-11);
    }

    #[test]
    fn bsc_and_awgn_closed_forms() {
        let c = reference_capacity(ReferenceKind::Bsc, 0.11).unwrap();
        assert!((c - 0.5).abs() < 1e-3);
        assert_eq!(reference_capacity(ReferenceKind::Bsc, 0.0).unwrap(), 1.0);
        assert_eq!(reference_capacity(ReferenceKind::Awgn, 1.0).unwrap(), 0.5);
        assert!(reference_capacity(ReferenceKind::Awgn, 0.0).is_err());
        assert!(reference_capacity(ReferenceKind::BiAwgn, -1.0).is_err());
        assert!(reference_capacities(ReferenceKind::Bsc, &[]).is_err());
        assert!("qam".parse::<ReferenceKind>().is_err());
    }

    /// Brute-force trapezoid integration of the BI-AWGN mutual information.
    fn biawgn_trapezoid(sigma: f64) -> f64 {
        let s2 = sigma * sigma;
        let (lo, hi, steps) = (1.0 - 14.0 * sigma, 1.0 + 14.0 * sigma, 400_000);
        let h = (hi - lo) / steps as f64;
        let mut acc = 0.0;
        for k in 0..=steps {
            let y = lo + k as f64 * h;
            let density = (-(y - 1.0).powi(2) / (2.0 * s2)).exp() / (sigma * (2.0 * PI).sqrt());
            let weight = if k == 0 || k == steps { 0.5 } else { 1.0 };
            acc += weight * density * softplus(-2.0 * y / s2) / LN_2;
        }
        1.0 - acc * h
    }

    #[test]
    fn biawgn_matches_trapezoid() {
        for &sigma in &[0.6, 0.8, 1.0, 1.5, 3.0] {
            let gh = reference_capacity(ReferenceKind::BiAwgn, sigma).unwrap();
            let tr = biawgn_trapezoid(sigma);
            assert!((gh - tr).abs() < 1e-6, "sigma {sigma}: {gh} vs {tr}");
        }
    }

    #[test]
    fn capacity_ordering() {
        for &sigma in &[0.5, 0.8, 1.0, 2.0] {
            let bi = reference_capacity(ReferenceKind::BiAwgn, sigma).unwrap();
            let awgn = reference_capacity(ReferenceKind::Awgn, sigma).unwrap();
            assert!(bi <= awgn + 1e-9);
            assert!(bi > 0.0 && bi < 1.0);
        }
    }
}
