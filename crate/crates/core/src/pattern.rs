//! Helpers for reading patterns: decibels, grid peaks and peak refinement.

/// `20·log10(x)`, for field magnitudes. Zero maps to `-inf`.
pub fn field_db(x: f64) -> f64 {
    20.0 * x.log10()
}

/// `10·log10(x)`, for powers and cross sections. Zero maps to `-inf`.
pub fn power_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Indices of strict interior local maxima of `values`, plus either endpoint
/// if it exceeds its single neighbour. Plateaus report their first index.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    if n == 1 {
        return vec![0];
    }
    for i in 0..n {
        let left = if i == 0 { f64::NEG_INFINITY } else { values[i - 1] };
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let right = if j + 1 == n { f64::NEG_INFINITY } else { values[j + 1] };
        if values[i] > left && values[i] > right {
            out.push(i);
        }
    }
    out
}

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while (hi - lo).abs() > tol {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
}

/// Local maxima of `f` sampled on `grid` (ascending), each refined within
/// its neighbouring grid cells to `tol`. Sorted by descending value.
pub fn find_peaks(f: impl Fn(f64) -> f64, grid: &[f64], tol: f64) -> Vec<Peak> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut peaks: Vec<Peak> = local_maxima(&values)
        .into_iter()
        .map(|i| {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            let x = if lo < hi { golden_max(&f, lo, hi, tol) } else { grid[i] };
            let (x, value) = if f(x) >= values[i] {
                (x, f(x))
            } else {
                (grid[i], values[i])
            };
            Peak { x, value }
        })
        .collect();
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value));
    peaks
}

/// Evenly spaced inclusive grid.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decibels() {
        assert_eq!(field_db(10.0), 20.0);
        assert_eq!(power_db(100.0), 20.0);
        assert_eq!(field_db(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn maxima_on_grid() {
        assert_eq!(local_maxima(&[0.0, 2.0, 1.0, 3.0, 3.0, 0.0]), vec![1, 3]);
        assert_eq!(local_maxima(&[5.0, 1.0, 2.0]), vec![0, 2]);
        assert_eq!(local_maxima(&[1.0, 1.0]), vec![0]);
    }

    #[test]
    fn refined_peak_of_parabola() {
        let grid = linspace(-1.0, 1.0, 11);
        let peaks = find_peaks(|x| 1.0 - (x - 0.123).powi(2), &grid, 1e-10);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].x - 0.123).abs() < 1e-8);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-90.0, 90.0, 181);
        assert_eq!(g[0], -90.0);
        assert_eq!(g[180], 90.0);
        assert_eq!(g[90], 0.0);
    }
}
