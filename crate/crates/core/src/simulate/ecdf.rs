use serde::Serialize;

/// Two-sided 95% Dvoretzky–Kiefer–Wolfowitz half-width for `n` samples.
pub fn dkw_halfwidth(n: u64) -> f64 {
    dkw_halfwidth_at(n, 0.05)
}

pub fn dkw_halfwidth_at(n: u64, alpha: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

/// Streaming empirical CDF on a fixed grid.
#[derive(Debug, Clone)]
pub struct EcdfAccumulator {
    grid: Vec<f64>,
    /// `bins[i]` counts samples in `(grid[i-1], grid[i]]`; the last slot holds
    /// samples above the grid.
    bins: Vec<u64>,
    zeros: u64,
    total: u64,
}

impl EcdfAccumulator {
    pub fn new(grid: Vec<f64>) -> Self {
        debug_assert!(grid.windows(2).all(|w| w[0] < w[1]), "grid must increase");
        let bins = vec![0; grid.len() + 1];
        Self {
            grid,
            bins,
            zeros: 0,
            total: 0,
        }
    }

    pub fn push(&mut self, x: f64) {
        let i = self.grid.partition_point(|&g| g < x);
        self.bins[i] += 1;
        if x == 0.0 {
            self.zeros += 1;
        }
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Merges an accumulator built on the same grid.
    pub fn merge(&mut self, other: &EcdfAccumulator) {
        assert_eq!(self.grid, other.grid, "merging needs a shared grid");
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.zeros += other.zeros;
        self.total += other.total;
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cdf(&self) -> Vec<f64> {
        let n = self.total.max(1) as f64;
        let mut acc = 0u64;
        self.bins[..self.grid.len()]
            .iter()
            .map(|c| {
                acc += c;
                acc as f64 / n
            })
            .collect()
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.zeros as f64 / self.total.max(1) as f64
    }
}

/// Estimated stationary law of the workload found by arrivals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcdfSummary {
    pub grid: Vec<f64>,
    pub cdf: Vec<f64>,
    pub atom_at_zero: f64,
    pub loss_fraction: f64,
    /// Samples behind the estimate (post burn-in).
    pub n_effective: u64,
    /// Uniform 95% DKW half-width.
    pub ci_halfwidth: f64,
}

impl EcdfSummary {
    pub fn tail(&self, i: usize) -> f64 {
        1.0 - self.cdf[i]
    }

    /// Number of samples strictly above `grid[i]`.
    pub fn exceedances(&self, i: usize) -> u64 {
        (self.tail(i) * self.n_effective as f64).round() as u64
    }

    /// Step interpolation of the empirical CDF (exact at grid points).
    pub fn cdf_at(&self, x: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g <= x);
        if i == 0 {
            0.0
        } else {
            self.cdf[i - 1]
        }
    }

    /// Sup distance to another CDF evaluated on this grid.
    pub fn sup_distance<F: Fn(f64) -> f64>(&self, other: F) -> f64 {
        self.grid
            .iter()
            .zip(&self.cdf)
            .map(|(&x, &c)| (c - other(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_counts() {
        let mut acc = EcdfAccumulator::new(vec![0.0, 1.0, 2.0]);
        for x in [0.0, 0.0, 0.5, 1.0, 1.5, 3.0, 7.0, 2.0] {
            acc.push(x);
        }
        assert_eq!(acc.cdf(), vec![0.25, 0.5, 0.75]);
        assert_eq!(acc.atom_at_zero(), 0.25);
        let mut other = acc.clone();
        other.merge(&acc);
        assert_eq!(other.cdf(), acc.cdf());
        assert_eq!(other.total(), 16);
    }

    #[test]
    fn dkw_shrinks_like_root_n() {
        let r = dkw_halfwidth(2_000_000) / dkw_halfwidth(1_000_000);
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((dkw_halfwidth(1_000_000) - 0.001358).abs() < 1e-6);
    }

    #[test]
    fn ks_statistic() {
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[0.0, 0.0, 1.0, 2.0], &[0.0, 1.0, 1.0, 2.0]) - 0.25).abs() < 1e-15);
    }
}
