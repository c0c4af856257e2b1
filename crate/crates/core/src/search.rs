//! Exhaustive enumeration of Cohn functions on `F_p` with values in `μ_m`.
//!
//! Candidates are the `m^(p-2)` exponent tuples `(f(2), ..., f(p-1))` in
//! lexicographic order (`f(2)` most significant); `f(0) = 0` and `f(1) = 1`
//! are fixed. Shard `i` of `n` takes the candidates whose position is
//! `≡ i (mod n)`.
//!
//! Both strategies end in an exact verdict. `Exhaustive` runs an exact
//! integer test on `Z[ζ_m]` for every candidate; `Screened` rejects
//! candidates whose floating-point autocorrelation misses `-1` by more than
//! the tolerance and only evaluates the survivors exactly. Every reported
//! solution is re-confirmed with [`is_cohn`].

use std::io::Write;
use std::thread;
use std::time::{Duration, Instant};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::{character_table, is_cohn, Character, CharacterError, FunctionTable};
use crate::cyclotomic::{tables, CycloTables};
use crate::finite_field::{make_prime_field, Field, FieldError};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_CEILING: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("root-of-unity modulus must be positive")]
    ZeroModulus,
    #[error("screen tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("shard index {index} is not below shard total {total}")]
    BadShard { index: u64, total: u64 },
    #[error("{candidates} candidates exceed the ceiling of {ceiling}; shard the search")]
    ResourceGuard { candidates: u128, ceiling: u64 },
    #[error("no reports to merge")]
    EmptyMerge,
    #[error("shard reports belong to different searches")]
    ConfigMismatch,
    #[error("shard {index} appears more than once")]
    OverlappingShard { index: u64 },
    #[error("shard {index} of {total} is missing")]
    MissingShard { index: u64, total: u64 },
    #[error("exact kernel accepted a tuple that the Cohn check rejects: {0:?}")]
    KernelDisagreement(Vec<u32>),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Screened,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "screened" => Ok(Strategy::Screened),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: u64,
    pub m: u64,
    pub strategy: Strategy,
    pub shard: Option<Shard>,
    pub screen_tolerance: f64,
    pub ceiling: u64,
}

impl SearchConfig {
    pub fn new(p: u64, m: u64, strategy: Strategy) -> Self {
        SearchConfig {
            p,
            m,
            strategy,
            shard: None,
            screen_tolerance: DEFAULT_TOLERANCE,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn with_shard(mut self, index: u64, total: u64) -> Self {
        self.shard = Some(Shard { index, total });
        self
    }

    fn shard_or_whole(&self) -> Shard {
        self.shard.unwrap_or(Shard { index: 0, total: 1 })
    }

    /// `m^(p-2)`.
    pub fn candidate_space(&self) -> u128 {
        (self.m as u128)
            .checked_pow((self.p.saturating_sub(2)) as u32)
            .unwrap_or(u128::MAX)
    }

    fn validate(&self) -> Result<Field, SearchError> {
        let field = make_prime_field(self.p)?;
        if self.m == 0 {
            return Err(SearchError::ZeroModulus);
        }
        if !(self.screen_tolerance > 0.0 && self.screen_tolerance.is_finite()) {
            return Err(SearchError::BadTolerance(self.screen_tolerance));
        }
        let shard = self.shard_or_whole();
        if shard.total == 0 || shard.index >= shard.total {
            return Err(SearchError::BadShard {
                index: shard.index,
                total: shard.total,
            });
        }
        let space = self.candidate_space();
        let guard = SearchError::ResourceGuard {
            candidates: space,
            ceiling: self.ceiling,
        };
        if space > u64::MAX as u128 || (shard.total == 1 && space > self.ceiling as u128) {
            return Err(guard);
        }
        Ok(field)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    /// Sorted by exponent tuple.
    pub solutions: Vec<FunctionTable>,
    pub candidates_examined: u64,
    /// Candidates passing the first stage: the floating screen for
    /// `Screened`, the exact kernel for `Exhaustive`.
    pub screen_survivors: u64,
    /// Tails `(f(2), ..., f(p-1))` of those candidates, in enumeration order.
    pub survivors: Vec<Vec<u32>>,
    #[serde(rename = "wall_time_nanos", with = "duration_nanos")]
    pub wall_time: Duration,
}

mod duration_nanos {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_nanos() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_nanos(u64::deserialize(d)?))
    }
}

impl SearchReport {
    /// Equality ignoring `wall_time`.
    pub fn same_result(&self, other: &SearchReport) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        a == *other
    }

    pub fn solution_tails(&self) -> Vec<Vec<u32>> {
        self.solutions
            .iter()
            .filter_map(FunctionTable::tail)
            .collect()
    }
}

/// Per-(p, m) data shared by both stages.
struct Kernel {
    p: usize,
    m: u64,
    cyclo: std::sync::Arc<CycloTables>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    acc: Vec<i64>,
}

impl Kernel {
    fn new(p: u64, m: u64) -> Self {
        let cyclo = tables(m);
        let angle = |e: u64| 2.0 * std::f64::consts::PI * e as f64 / m as f64;
        Kernel {
            p: p as usize,
            m,
            acc: vec![0; cyclo.degree()],
            cyclo,
            cos: (0..m).map(|e| angle(e).cos()).collect(),
            sin: (0..m).map(|e| angle(e).sin()).collect(),
        }
    }

    /// `|autocorrelation(h) + 1| < tol` for every `h`, in floating point.
    fn screen(&self, e: &[u32], tol: f64) -> bool {
        let p = self.p;
        let m = self.m as u32;
        let tol2 = tol * tol;
        for h in 1..p {
            let (mut re, mut im) = (1.0f64, 0.0f64);
            for x in 1..p {
                let y = (x + h) % p;
                if y == 0 {
                    continue;
                }
                let d = ((e[x] + m - e[y]) % m) as usize;
                re += self.cos[d];
                im += self.sin[d];
            }
            if re * re + im * im >= tol2 {
                return false;
            }
        }
        true
    }

    /// Exact autocorrelation test in the power basis of `Z[ζ_m]`.
    fn exact(&mut self, e: &[u32]) -> bool {
        let p = self.p;
        let m = self.m as u32;
        for h in 1..p {
            self.acc.iter_mut().for_each(|a| *a = 0);
            for x in 1..p {
                let y = (x + h) % p;
                if y == 0 {
                    continue;
                }
                let d = (e[x] + m - e[y]) % m;
                for (a, &c) in self.acc.iter_mut().zip(self.cyclo.power(d as u64)) {
                    *a += c;
                }
            }
            if self.acc[0] != -1 || self.acc[1..].iter().any(|&c| c != 0) {
                return false;
            }
        }
        true
    }
}

/// Adds `step` to the base-`m` number in `digits` (last digit least significant).
fn advance(digits: &mut [u32], m: u64, mut step: u64) {
    for d in digits.iter_mut().rev() {
        if step == 0 {
            break;
        }
        let total = *d as u64 + step % m;
        *d = (total % m) as u32;
        step = step / m + total / m;
    }
}

/// Enumerates every Cohn function for the configuration.
pub fn enumerate_cohn(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let field = config.validate()?;
    let start = Instant::now();
    let p = config.p as usize;
    let m = config.m;
    let shard = config.shard_or_whole();
    let space = config.candidate_space() as u64;
    let mut kernel = Kernel::new(config.p, m);

    let mut e = vec![0u32; p];
    let mut digits = vec![0u32; p - 2];
    advance(&mut digits, m, shard.index);

    let mut examined = 0u64;
    let mut survivors = Vec::new();
    let mut solutions = Vec::new();
    let mut idx = shard.index;
    while idx < space {
        e[2..].copy_from_slice(&digits);
        examined += 1;
        let first_stage = match config.strategy {
            Strategy::Screened => kernel.screen(&e, config.screen_tolerance),
            Strategy::Exhaustive => kernel.exact(&e),
        };
        if first_stage {
            survivors.push(digits.clone());
            let f = FunctionTable::from_tail(&field, m, &digits)?;
            if is_cohn(&f).holds() {
                solutions.push(f);
            } else if config.strategy == Strategy::Exhaustive {
                return Err(SearchError::KernelDisagreement(digits));
            }
        }
        idx = match idx.checked_add(shard.total) {
            Some(next) => next,
            None => break,
        };
        advance(&mut digits, m, shard.total);
    }

    Ok(SearchReport {
        config: config.clone(),
        solutions,
        candidates_examined: examined,
        screen_survivors: survivors.len() as u64,
        survivors,
        wall_time: start.elapsed(),
    })
}

/// Runs `threads` shards concurrently and merges them.
pub fn enumerate_cohn_parallel(
    config: &SearchConfig,
    threads: u64,
) -> Result<SearchReport, SearchError> {
    if threads <= 1 {
        return enumerate_cohn(config);
    }
    let mut base = config.clone();
    base.shard = None;
    base.validate()?;
    let configs: Vec<SearchConfig> = (0..threads)
        .map(|i| base.clone().with_shard(i, threads))
        .collect();
    let reports = thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || enumerate_cohn(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search shard panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    merge_shards(&reports)
}

/// Nontrivial character tables with values in `μ_m`: the characters whose
/// order divides `gcd(m, p-1)`. There are `gcd(m, p-1) - 1` of them.
pub fn expected_solution_set(p: u64, m: u64) -> Result<Vec<FunctionTable>, SearchError> {
    let field = make_prime_field(p)?;
    if m == 0 {
        return Err(SearchError::ZeroModulus);
    }
    let d = m.gcd(&(p - 1));
    let step = (p - 1) / d;
    let mut out = (1..d)
        .map(|j| character_table(&Character::new(&field, j * step)?, m))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.exponents().cmp(b.exponents()));
    Ok(out)
}

/// Combines a complete, disjoint set of shard reports into the unsharded report.
pub fn merge_shards(reports: &[SearchReport]) -> Result<SearchReport, SearchError> {
    let first = reports.first().ok_or(SearchError::EmptyMerge)?;
    let mut base = first.config.clone();
    base.shard = None;
    let total = first.config.shard_or_whole().total;
    let mut seen = vec![false; total as usize];
    for r in reports {
        let mut c = r.config.clone();
        let shard = c.shard_or_whole();
        c.shard = None;
        if c != base || shard.total != total {
            return Err(SearchError::ConfigMismatch);
        }
        if std::mem::replace(&mut seen[shard.index as usize], true) {
            return Err(SearchError::OverlappingShard { index: shard.index });
        }
    }
    if let Some(index) = seen.iter().position(|s| !s) {
        return Err(SearchError::MissingShard {
            index: index as u64,
            total,
        });
    }
    let mut solutions: Vec<FunctionTable> = reports
        .iter()
        .flat_map(|r| r.solutions.iter().cloned())
        .collect();
    solutions.sort_by(|a, b| a.exponents().cmp(b.exponents()));
    let mut survivors: Vec<Vec<u32>> = reports
        .iter()
        .flat_map(|r| r.survivors.iter().cloned())
        .collect();
    survivors.sort();
    Ok(SearchReport {
        config: base,
        solutions,
        candidates_examined: reports.iter().map(|r| r.candidates_examined).sum(),
        screen_survivors: reports.iter().map(|r| r.screen_survivors).sum(),
        survivors,
        wall_time: reports.iter().map(|r| r.wall_time).sum(),
    })
}

/// CSV rows `p, m, strategy, candidates, solutions, wall_time_secs`.
pub fn write_csv_summary<W: Write>(reports: &[SearchReport], out: W) -> Result<(), SearchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "m",
        "strategy",
        "candidates",
        "solutions",
        "wall_time_secs",
    ])?;
    for r in reports {
        let strategy = match r.config.strategy {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Screened => "screened",
        };
        w.write_record([
            r.config.p.to_string(),
            r.config.m.to_string(),
            strategy.to_string(),
            r.candidates_examined.to_string(),
            r.solutions.len().to_string(),
            format!("{:.6}", r.wall_time.as_secs_f64()),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
