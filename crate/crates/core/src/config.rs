use serde::{Deserialize, Serialize};

/// Tunables shared by every randomized or tolerance-driven routine.
///
/// Identical configs and inputs produce identical results regardless of the
/// number of worker threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Absolute tolerance for sign decisions on β and copositivity minima.
    pub tol: f64,
    /// Grid points per axis for the face grids; `None` picks by dimension.
    pub grid: Option<usize>,
    /// Overrides every multistart count below when set.
    pub starts: Option<usize>,
    pub beta_starts: usize,
    pub norm_starts: usize,
    pub eigen_starts: usize,
    pub tcp_starts: usize,
    pub seed: u64,
    /// Largest `n` accepted by TCP support enumeration.
    pub enumeration_cap: usize,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-6,
            grid: None,
            starts: None,
            beta_starts: 16,
            norm_starts: 64,
            eigen_starts: 32,
            tcp_starts: 16,
            seed: 0,
            enumeration_cap: 6,
            threads: None,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config { seed, ..Config::default() }
    }

    pub fn beta_starts(&self) -> usize {
        self.starts.unwrap_or(self.beta_starts)
    }

    pub fn norm_starts(&self) -> usize {
        self.starts.unwrap_or(self.norm_starts)
    }

    pub fn eigen_starts(&self) -> usize {
        self.starts.unwrap_or(self.eigen_starts)
    }

    pub fn tcp_starts(&self) -> usize {
        self.starts.unwrap_or(self.tcp_starts)
    }

    /// Face-grid resolution: 21 per axis up to n = 4, 9 for n in {5, 6},
    /// none (multistart only) beyond.
    pub fn grid_resolution(&self, n: usize) -> Option<usize> {
        match self.grid {
            Some(g) => Some(g.max(2)),
            None if n <= 4 => Some(21),
            None if n <= 6 => Some(9),
            None => None,
        }
    }

    /// Runs `f` inside a pool of `threads` workers when configured.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(t) if t > 0 => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            _ => f(),
        }
    }
}
