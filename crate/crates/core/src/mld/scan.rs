//! Partitioned enumeration of the group elements `j = 1, …, r-1`.
//!
//! For each `j` the kernel tracks the residues `j·a_i mod r` and evaluates
//!
//! ```text
//! value(j) · r = Σ_i res_i − min_m Σ_i m_i · res_i
//! ```
//!
//! (with the minimum taken as 0 when there are no monomials). The range is
//! cut into contiguous blocks; each block keeps its own lexicographic
//! minimum of `(value, j)` and the blocks are reduced in order, so the result
//! does not depend on the worker count.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

/// Progress callback: `(candidates done, candidates total)`.
pub type ProgressFn = dyn Fn(u64, u64) + Send + Sync;

#[derive(Clone)]
pub struct ScanOptions {
    pub workers: usize,
    pub progress: Option<Arc<ProgressFn>>,
    /// Report progress each time this many more candidates are done.
    pub progress_every: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { workers: 1, progress: None, progress_every: 10_000_000 }
    }
}

impl std::fmt::Debug for ScanOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScanOptions")
            .field("workers", &self.workers)
            .field("progress", &self.progress.is_some())
            .field("progress_every", &self.progress_every)
            .finish()
    }
}

impl ScanOptions {
    pub fn with_workers(workers: usize) -> Self {
        ScanOptions { workers: workers.max(1), ..Default::default() }
    }
}

/// Result of a full scan, values given as numerators over `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ScanOutcome {
    /// Smallest `j` with a negative value, if any.
    pub first_negative: Option<(BigInt, u64)>,
    /// Lexicographic minimum of `(value, j)`; `None` for an empty range or
    /// when a negative value cut the scan short.
    pub minimum: Option<(BigInt, u64)>,
}

/// Residue steps and sparse monomials with every product fitting in `u128`.
struct WordKernel {
    r: u64,
    steps: Vec<u64>,
    monomials: Vec<Vec<(usize, u128)>>,
}

/// Fallback when the word-size bounds do not hold.
struct BigKernel {
    r: BigInt,
    steps: Vec<BigInt>,
    monomials: Vec<Vec<(usize, BigInt)>>,
}

pub(crate) struct Kernel {
    word: Option<WordKernel>,
    big: BigKernel,
}

const CHECK_INTERVAL: u64 = 1 << 14;

impl Kernel {
    /// `steps` are the weights `a_i` (any integers), `monomials` the exponent
    /// vectors of the chart (empty for a plain cyclic quotient).
    pub fn new(r: &BigInt, steps: &[BigInt], monomials: &[Vec<BigInt>]) -> Kernel {
        let reduced: Vec<BigInt> = steps.iter().map(|a| ((a % r) + r) % r).collect();
        let sparse: Vec<Vec<(usize, BigInt)>> = monomials
            .iter()
            .map(|m| m.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (i, e.clone())).collect())
            .collect();
        let big = BigKernel { r: r.clone(), steps: reduced.clone(), monomials: sparse.clone() };
        Kernel { word: Self::word_kernel(r, &reduced, &sparse), big }
    }

    fn word_kernel(r: &BigInt, steps: &[BigInt], sparse: &[Vec<(usize, BigInt)>]) -> Option<WordKernel> {
        let r64 = r.to_u64()?;
        let limit = BigInt::from(i128::MAX) >> 2;
        let top = BigInt::from(r64.saturating_sub(1));
        if BigInt::from(steps.len()) * &top > limit {
            return None;
        }
        let mut monomials = Vec::with_capacity(sparse.len());
        for m in sparse {
            let bound: BigInt = m.iter().map(|(_, e)| e * &top).sum();
            if bound > limit {
                return None;
            }
            monomials.push(m.iter().map(|(i, e)| Some((*i, e.to_u128()?))).collect::<Option<Vec<_>>>()?);
        }
        let steps = steps.iter().map(|s| s.to_u64()).collect::<Option<Vec<_>>>()?;
        Some(WordKernel { r: r64, steps, monomials })
    }

    pub fn uses_word_path(&self) -> bool {
        self.word.is_some()
    }

    /// Numerator of the value at a single `j`.
    pub fn numerator_at(&self, j: &BigInt) -> BigInt {
        let res: Vec<BigInt> = self.big.steps.iter().map(|s| (j * s) % &self.big.r).collect();
        self.big.numerator(&res)
    }

    /// Scans `j = 1, …, r-1`.
    pub fn scan(&self, options: &ScanOptions) -> ScanOutcome {
        match &self.word {
            Some(w) => scan_blocks(w.r, options, |lo, hi, ctx| w.block(lo, hi, ctx)),
            None => {
                let r = self.big.r.to_u64().expect("caller checks the order fits a word");
                scan_blocks(r, options, |lo, hi, ctx| self.big.block(lo, hi, ctx))
            }
        }
    }
}

struct BlockContext<'a> {
    negative_bound: &'a AtomicU64,
    done: &'a AtomicU64,
    total: u64,
    options: &'a ScanOptions,
}

impl BlockContext<'_> {
    fn report(&self, count: u64) {
        let before = self.done.fetch_add(count, Ordering::Relaxed);
        if let Some(cb) = &self.options.progress {
            let every = self.options.progress_every.max(1);
            let after = before + count;
            if after / every > before / every {
                cb(after, self.total);
            }
        }
    }

    /// True once some smaller `j` is already known to be negative.
    fn superseded(&self, j: u64) -> bool {
        self.negative_bound.load(Ordering::Relaxed) < j
    }
}

struct BlockResult<V> {
    minimum: Option<(V, u64)>,
    negative: Option<(V, u64)>,
}

fn scan_blocks<V, F>(r: u64, options: &ScanOptions, block: F) -> ScanOutcome
where
    V: Ord + Send + Into<BigInt>,
    F: Fn(u64, u64, &BlockContext<'_>) -> BlockResult<V> + Sync,
{
    if r <= 1 {
        return ScanOutcome { first_negative: None, minimum: None };
    }
    let total = r - 1;
    let workers = options.workers.max(1) as u64;
    let block_len = total.div_ceil(workers * 8).max(1 << 16);
    let ranges: Vec<(u64, u64)> = (0..total.div_ceil(block_len))
        .map(|b| {
            let lo = 1 + b * block_len;
            (lo, (lo + block_len).min(r))
        })
        .collect();

    let negative_bound = AtomicU64::new(u64::MAX);
    let done = AtomicU64::new(0);
    let ctx = BlockContext { negative_bound: &negative_bound, done: &done, total, options };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .expect("failed to build worker pool");
    let results: Vec<BlockResult<V>> =
        pool.install(|| ranges.par_iter().map(|&(lo, hi)| block(lo, hi, &ctx)).collect());

    // Blocks are in ascending j order, so the first negative and the first
    // strict minimum found are the smallest witnesses.
    let mut first_negative = None;
    let mut minimum: Option<(V, u64)> = None;
    for res in results {
        if first_negative.is_none() {
            if let Some((v, j)) = res.negative {
                first_negative = Some((v.into(), j));
            }
        }
        if let Some((v, j)) = res.minimum {
            if minimum.as_ref().is_none_or(|(best, _)| v < *best) {
                minimum = Some((v, j));
            }
        }
    }
    let minimum = if first_negative.is_some() { None } else { minimum.map(|(v, j)| (v.into(), j)) };
    ScanOutcome { first_negative, minimum }
}

impl WordKernel {
    fn numerator(&self, res: &[u64]) -> i128 {
        let sum: u128 = res.iter().map(|&x| x as u128).sum();
        let min =
            self.monomials.iter().map(|m| m.iter().map(|&(i, e)| e * res[i] as u128).sum::<u128>()).min().unwrap_or(0);
        sum as i128 - min as i128
    }

    fn block(&self, lo: u64, hi: u64, ctx: &BlockContext<'_>) -> BlockResult<i128> {
        let r = self.r;
        let mut res: Vec<u64> = self.steps.iter().map(|&s| ((lo as u128 * s as u128) % r as u128) as u64).collect();
        let mut best: Option<(i128, u64)> = None;
        let mut pending = 0u64;
        let mut j = lo;
        while j < hi {
            let v = self.numerator(&res);
            if v < 0 {
                ctx.negative_bound.fetch_min(j, Ordering::Relaxed);
                ctx.report(pending + 1);
                return BlockResult { minimum: best, negative: Some((v, j)) };
            }
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, j));
            }
            for (x, &s) in res.iter_mut().zip(&self.steps) {
                *x += s;
                if *x >= r {
                    *x -= r;
                }
            }
            j += 1;
            pending += 1;
            if pending == CHECK_INTERVAL {
                ctx.report(pending);
                pending = 0;
                if ctx.superseded(j) {
                    return BlockResult { minimum: best, negative: None };
                }
            }
        }
        ctx.report(pending);
        BlockResult { minimum: best, negative: None }
    }
}

impl BigKernel {
    fn numerator(&self, res: &[BigInt]) -> BigInt {
        let sum: BigInt = res.iter().sum();
        let min = self
            .monomials
            .iter()
            .map(|m| m.iter().map(|(i, e)| e * &res[*i]).sum::<BigInt>())
            .min()
            .unwrap_or_else(BigInt::zero);
        sum - min
    }

    fn block(&self, lo: u64, hi: u64, ctx: &BlockContext<'_>) -> BlockResult<BigInt> {
        let mut res: Vec<BigInt> = self.steps.iter().map(|s| (s * lo) % &self.r).collect();
        let mut best: Option<(BigInt, u64)> = None;
        let mut pending = 0u64;
        for j in lo..hi {
            let v = self.numerator(&res);
            if v < BigInt::zero() {
                ctx.negative_bound.fetch_min(j, Ordering::Relaxed);
                ctx.report(pending + 1);
                return BlockResult { minimum: best, negative: Some((v, j)) };
            }
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, j));
            }
            for (x, s) in res.iter_mut().zip(&self.steps) {
                *x += s;
                if *x >= self.r {
                    *x -= &self.r;
                }
            }
            pending += 1;
            if pending == CHECK_INTERVAL {
                ctx.report(pending);
                pending = 0;
                if ctx.superseded(j + 1) {
                    return BlockResult { minimum: best, negative: None };
                }
            }
        }
        ctx.report(pending);
        BlockResult { minimum: best, negative: None }
    }
}
