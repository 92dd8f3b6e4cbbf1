//! Exhaustive enumeration of the joint distribution of an index's label and
//! its bit, straight from the label recursion.

use crate::channels::LabeledChannel;
use crate::decoder::kernels::{f_tilde, g};
use crate::posynomial::LabelPosynomial;

use super::SynthesisError;

/// Upper limit on `(2 gamma + 1)^N 2^N`.
pub const ORACLE_BUDGET: f64 = 1e8;

/// `x = (enc(u_even xor u_odd), enc(u_odd))`.
fn arikan_encode(u: &[u8]) -> Vec<u8> {
    if u.len() == 1 {
        return u.to_vec();
    }
    let half = u.len() / 2;
    let mixed: Vec<u8> = (0..half).map(|k| u[2 * k] ^ u[2 * k + 1]).collect();
    let odd: Vec<u8> = (0..half).map(|k| u[2 * k + 1]).collect();
    let mut x = arikan_encode(&mixed);
    x.extend(arikan_encode(&odd));
    x
}

/// Label of index `i` given the channel labels and the bits `u_0 .. u_{i-1}`.
fn index_label(labels: &[i64], prefix: &[u8], i: usize) -> i64 {
    if labels.len() == 1 {
        return labels[0];
    }
    let half = labels.len() / 2;
    let j = i / 2;
    let mixed: Vec<u8> = (0..j).map(|k| prefix[2 * k] ^ prefix[2 * k + 1]).collect();
    let odd: Vec<u8> = (0..j).map(|k| prefix[2 * k + 1]).collect();
    let a = index_label(&labels[..half], &mixed, j);
    let b = index_label(&labels[half..], &odd, j);
    if i % 2 == 0 {
        f_tilde(a, b)
    } else {
        g(prefix[2 * j], a, b)
    }
}

fn bits(value: usize, len: usize) -> Vec<u8> {
    (0..len).map(|k| ((value >> k) & 1) as u8).collect()
}

/// Exact `Q(t; 0)` for index `i` of the length-`2^n` code by enumerating every
/// label tuple and every input vector.
pub fn brute_force_joint(
    ch: &LabeledChannel,
    n: usize,
    i: usize,
) -> Result<LabelPosynomial, SynthesisError> {
    if n >= usize::BITS as usize || i >> n != 0 {
        return Err(SynthesisError::IndexOutOfRange { i, n });
    }
    let len = 1usize << n.min(20);
    let work = ((2 * ch.gamma() + 1) as f64).powf(len as f64) * 2f64.powf(len as f64);
    if n > 20 || work > ORACLE_BUDGET {
        return Err(SynthesisError::OracleTooLarge {
            work,
            budget: ORACLE_BUDGET,
        });
    }

    let support = ch.support();
    let inputs: Vec<(Vec<u8>, Vec<u8>)> = (0..1usize << len)
        .map(|v| {
            let u = bits(v, len);
            let x = arikan_encode(&u);
            (u, x)
        })
        .filter(|(u, _)| u[i] == 0)
        .collect();

    let t_max = ch.gamma() << i.count_ones();
    let mut coeffs = vec![0.0; 2 * t_max + 1];
    let weight = 0.5f64.powi(len as i32);
    let mut digits = vec![0usize; len];
    let mut labels = vec![support[0]; len];
    let mut prefix_labels = vec![0i64; 1 << i];
    loop {
        for (p, slot) in prefix_labels.iter_mut().enumerate() {
            *slot = index_label(&labels, &bits(p, i), i);
        }
        for (u, x) in &inputs {
            let prob: f64 = labels
                .iter()
                .zip(x)
                .map(|(&t, &xk)| ch.transition(t, xk))
                .product();
            let p = u[..i]
                .iter()
                .enumerate()
                .fold(0, |acc, (k, &b)| acc | (b as usize) << k);
            let t = prefix_labels[p];
            coeffs[(t + t_max as i64) as usize] += weight * prob;
        }

        let mut k = 0;
        loop {
            if k == len {
                return Ok(LabelPosynomial::new(t_max, coeffs)?);
            }
            digits[k] += 1;
            if digits[k] < support.len() {
                labels[k] = support[digits[k]];
                break;
            }
            digits[k] = 0;
            labels[k] = support[0];
            k += 1;
        }
    }
}
