//! Capacity of robust `T`-private retrieval, computed two independent ways.

use num_rational::Ratio;
use tpir_core::{Error, Result};

fn check(messages: usize, responders: usize, colluders: usize) -> Result<()> {
    if messages == 0 || colluders == 0 || colluders > responders {
        return Err(Error::InvalidParams(format!(
            "capacity needs K >= 1 and 1 <= T <= N, got K={messages}, N={responders}, T={colluders}"
        )));
    }
    Ok(())
}

fn pow(base: usize, exp: usize) -> Result<u128> {
    (base as u128)
        .checked_pow(exp as u32)
        .ok_or_else(|| Error::TooLarge(format!("{base}^{exp}")))
}

/// `(1 - T/N) / (1 - (T/N)^K)`, or `1/K` when `T = N`.
pub fn capacity(messages: usize, responders: usize, colluders: usize) -> Result<Ratio<u128>> {
    check(messages, responders, colluders)?;
    if colluders == responders {
        return Ok(Ratio::new(1, messages as u128));
    }
    let (n, t) = (responders as u128, colluders as u128);
    let nk = pow(responders, messages)?;
    let tk = pow(colluders, messages)?;
    // ((N - T)/N) / ((N^K - T^K)/N^K) = (N - T) N^(K-1) / (N^K - T^K)
    let num = (n - t)
        .checked_mul(nk / n)
        .ok_or_else(|| Error::TooLarge("capacity numerator".into()))?;
    Ok(Ratio::new(num, nk - tk))
}

/// `1 + T/N + ... + (T/N)^(K-1)`: optimal download per desired symbol.
pub fn download_cost_per_symbol(messages: usize, responders: usize, colluders: usize) -> Result<Ratio<u128>> {
    check(messages, responders, colluders)?;
    let denom = pow(responders, messages - 1)?;
    let mut num: u128 = 0;
    for i in 0..messages {
        let term = pow(colluders, i)?
            .checked_mul(pow(responders, messages - 1 - i)?)
            .ok_or_else(|| Error::TooLarge("series term".into()))?;
        num = num
            .checked_add(term)
            .ok_or_else(|| Error::TooLarge("series sum".into()))?;
    }
    Ok(Ratio::new(num, denom))
}

/// Reciprocal of the series; an independent route to [`capacity`].
pub fn capacity_from_series(messages: usize, responders: usize, colluders: usize) -> Result<Ratio<u128>> {
    Ok(download_cost_per_symbol(messages, responders, colluders)?.recip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(capacity(2, 3, 2).unwrap(), Ratio::new(3, 5));
        assert_eq!(capacity(2, 4, 2).unwrap(), Ratio::new(2, 3));
        assert_eq!(capacity(2, 4, 3).unwrap(), Ratio::new(4, 7));
        assert_eq!(capacity(3, 3, 2).unwrap(), Ratio::new(9, 19));
        assert_eq!(capacity(5, 3, 3).unwrap(), Ratio::new(1, 5));
        for n in 1..6 {
            for t in 1..=n {
                assert_eq!(capacity(1, n, t).unwrap(), Ratio::from_integer(1));
            }
        }
    }

    #[test]
    fn routes_agree() {
        for k in 1..=12 {
            for n in 1..=9 {
                for t in 1..=n {
                    assert_eq!(capacity(k, n, t).unwrap(), capacity_from_series(k, n, t).unwrap(), "{k} {n} {t}");
                }
            }
        }
    }

    #[test]
    fn cost_per_symbol() {
        assert_eq!(download_cost_per_symbol(3, 3, 2).unwrap(), Ratio::new(19, 9));
    }

    #[test]
    fn invalid_ranges() {
        assert!(capacity(0, 3, 2).is_err());
        assert!(capacity(2, 3, 0).is_err());
        assert!(capacity(2, 3, 4).is_err());
    }
}
