use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// `A0` from the exact fit `A(h) = A0 + sum_{k<m-1} c_k h^{order+k}` through
/// `m` samples.
fn fit_limit(window: &[(f64, f64)], order: u32) -> Result<f64> {
    let m = window.len();
    // scale h to keep the matrix well conditioned
    let scale = window[0].0;
    let a = DMatrix::from_fn(m, m, |i, k| {
        if k == 0 {
            1.0
        } else {
            (window[i].0 / scale).powi((order as usize + k - 1) as i32)
        }
    });
    let b = DVector::from_iterator(m, window.iter().map(|s| s.1));
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::domain("degenerate Richardson system"))?;
    Ok(x[0])
}

/// Richardson table built from samples `A(h_i)`. `table[j]` holds the
/// estimates after eliminating the first `j` powers of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct RichardsonResult {
    pub estimate: f64,
    /// Difference between the last two entries of the final and previous
    /// columns; a rough error indicator.
    pub error: f64,
    pub table: Vec<Vec<f64>>,
    /// False when the raw samples do not approach their limit monotonically
    /// (successive differences change sign or grow), in which case the
    /// assumed expansion is suspect.
    pub monotone: bool,
}

/// Extrapolate `A(h) = A0 + c1 h^p + c2 h^{p+1} + ...` to `h = 0` from samples
/// at strictly decreasing step sizes. `order` is the leading power `p`.
pub fn richardson(samples: &[(f64, f64)], order: u32) -> Result<RichardsonResult> {
    if samples.len() < 3 {
        return Err(Error::domain("richardson needs at least three samples"));
    }
    if order == 0 {
        return Err(Error::domain("leading order must be >= 1"));
    }
    for (i, a) in samples.iter().enumerate() {
        if !(a.0 > 0.0 && a.0.is_finite() && a.1.is_finite()) {
            return Err(Error::domain(format!("bad sample {a:?}")));
        }
        if i > 0 && !(a.0 < samples[i - 1].0) {
            return Err(Error::domain("step sizes must be strictly decreasing"));
        }
    }
    let mut table = vec![samples.iter().map(|s| s.1).collect::<Vec<f64>>()];
    for j in 1..samples.len() {
        let col: Vec<f64> = (0..samples.len() - j)
            .map(|i| fit_limit(&samples[i..=i + j], order))
            .collect::<Result<_>>()?;
        table.push(col);
    }
    let last = table.last().unwrap()[0];
    let prev_col = &table[table.len() - 2];
    let error = (last - prev_col[prev_col.len() - 1]).abs();
    let diffs: Vec<f64> = table[0].windows(2).map(|w| w[1] - w[0]).collect();
    let monotone = diffs
        .windows(2)
        .all(|d| d[0] * d[1] >= 0.0 && d[1].abs() <= d[0].abs());
    Ok(RichardsonResult { estimate: last, error, table, monotone })
}
