//! Stage decisions by exhaustive search over the two cosets.
//!
//! With a prefix fixed, stage `i` of min-sum SC picks the value of `u_i` whose
//! coset contains the single most likely codeword, measured by the
//! correlation `sum_k (1 - 2 x_k) lambda_k`.

use super::{check_bits, encode_unchecked, log2_len, DecoderError};

/// Largest block length accepted by [`coset_max_oracle`].
pub const ORACLE_MAX_LEN: usize = 16;

pub fn coset_max_oracle(llrs: &[f64], i: usize, prefix: &[u8]) -> Result<u8, DecoderError> {
    let len = llrs.len();
    let n = log2_len(len)?;
    if len > ORACLE_MAX_LEN {
        return Err(DecoderError::TooLong(len));
    }
    if i >= len {
        return Err(DecoderError::StageOutOfRange { i, len });
    }
    if prefix.len() != i {
        return Err(DecoderError::LengthMismatch {
            expected: i,
            got: prefix.len(),
        });
    }
    check_bits(prefix)?;

    let mut best = [f64::NEG_INFINITY; 2];
    let free = len - i - 1;
    let mut u = prefix.to_vec();
    u.resize(len, 0);
    for bit in 0..2u8 {
        u[i] = bit;
        for tail in 0..1usize << free {
            for k in 0..free {
                u[i + 1 + k] = ((tail >> k) & 1) as u8;
            }
            let x = encode_unchecked(&u, n);
            let score: f64 = x
                .iter()
                .zip(llrs)
                .map(|(&xk, &l)| if xk == 0 { l } else { -l })
                .sum();
            best[bit as usize] = best[bit as usize].max(score);
        }
    }
    Ok(u8::from(best[0] < best[1]))
}
