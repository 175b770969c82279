//! Deterministic benchmark harness with min-of-repeats timing.

pub mod algos;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::array::{ArrayList, ArrayRing, MIN_CAPACITY};
use crate::block::{validate_block_capacity, ArrayBlock, BlockCapacityError, MIN_PRIMARY_CAPACITY};
use crate::linked::{LinkedList, NoCacheList, SingleList, DOUBLY_LINK_WORDS, SINGLY_LINK_WORDS};
use crate::oracle::OracleList;
use crate::prng::{Prng, ZeroBound};
use crate::sequence::{SeqError, StructureId, WORD_BYTES};

use algos::{BenchOutput, Deadline, End, Increment, Search};

/// Largest `n` at which `nocachelist` is still admitted.
pub const NOCACHE_MAX_N: usize = 5_000;

/// Random-increment bounds the fairbench variants are defined for.
pub const ALLOWED_K: [u64; 3] = [32, 64, 128];

/// Element-count ceiling used on the 16 GB reference machine.
pub const REFERENCE_N_MAX: usize = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BenchId {
    Stroustrup,
    StroustrupBinary,
    Fairbench,
    FairbenchRand,
    AddLast,
    AddFirst,
}

impl BenchId {
    pub const ALL: [BenchId; 6] = [
        BenchId::Stroustrup,
        BenchId::StroustrupBinary,
        BenchId::Fairbench,
        BenchId::FairbenchRand,
        BenchId::AddLast,
        BenchId::AddFirst,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchId::Stroustrup => "stroustrup",
            BenchId::StroustrupBinary => "stroustrup-binary",
            BenchId::Fairbench => "fairbench",
            BenchId::FairbenchRand => "fairbench-rand",
            BenchId::AddLast => "addlast",
            BenchId::AddFirst => "addfirst",
        }
    }

    /// Smallest `n` the bench body is defined for.
    pub fn min_n(self) -> usize {
        match self {
            BenchId::Fairbench | BenchId::FairbenchRand => 3,
            _ => 1,
        }
    }

    pub fn uses_k(self) -> bool {
        self == BenchId::FairbenchRand
    }
}

impl fmt::Display for BenchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown bench id `{0}`")]
pub struct UnknownBench(pub String);

impl FromStr for BenchId {
    type Err = UnknownBench;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BenchId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| UnknownBench(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{structure} is not admitted for {bench}: {reason}")]
pub struct Inadmissible {
    pub bench: BenchId,
    pub structure: StructureId,
    pub reason: &'static str,
}

/// Rejects pairings whose cost is hopeless by construction.
pub fn check_admissible(
    bench: BenchId,
    structure: StructureId,
    n: usize,
) -> Result<(), Inadmissible> {
    let reason = match (bench, structure) {
        (BenchId::AddLast, StructureId::SingleList) => {
            Some("remove_last is linear on a one-way list")
        }
        (BenchId::AddFirst, StructureId::ArrayList | StructureId::Oracle) => {
            Some("add_first shifts the whole left-aligned array")
        }
        (_, StructureId::NoCacheList) if n > NOCACHE_MAX_N => {
            Some("every indexed access walks from an end; limited to n <= 5000")
        }
        _ => None,
    };
    match reason {
        Some(reason) => Err(Inadmissible {
            bench,
            structure,
            reason,
        }),
        None => Ok(()),
    }
}

/// Upper bound on the modeled footprint of `structure` holding `n` elements.
///
/// Arrays are charged for the power-of-two capacity covering `n`. Blocks are
/// charged as if every block were only half full, plus two partial blocks.
pub fn model_peak_bytes(structure: StructureId, n: usize, block_capacity: usize) -> u128 {
    let n = n as u128;
    let words: u128 = match structure {
        StructureId::NoCacheList => {
            NoCacheList::HEADER_WORDS as u128 + DOUBLY_LINK_WORDS as u128 * n
        }
        StructureId::LinkedList => LinkedList::HEADER_WORDS as u128 + DOUBLY_LINK_WORDS as u128 * n,
        StructureId::SingleList => SingleList::HEADER_WORDS as u128 + SINGLY_LINK_WORDS as u128 * n,
        StructureId::ArrayList => {
            ArrayList::HEADER_WORDS as u128 + pow2_at_least(n, MIN_CAPACITY as u128)
        }
        StructureId::ArrayRing => {
            ArrayRing::HEADER_WORDS as u128 + pow2_at_least(n, MIN_CAPACITY as u128)
        }
        StructureId::Oracle => OracleList::HEADER_WORDS as u128 + pow2_at_least(n, 4),
        StructureId::ArrayBlock => {
            let b = block_capacity as u128;
            let blocks = (2 * n).div_ceil(b) + 2;
            ArrayBlock::HEADER_WORDS as u128
                + ArrayBlock::SLOT_WORDS as u128
                    * pow2_at_least(blocks, MIN_PRIMARY_CAPACITY as u128)
                + blocks * (ArrayBlock::BLOCK_HEADER_WORDS as u128 + b)
        }
    };
    words * WORD_BYTES as u128
}

fn pow2_at_least(n: u128, min: u128) -> u128 {
    n.max(min).next_power_of_two()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSpec {
    pub bench: BenchId,
    pub structure: StructureId,
    pub n: usize,
    /// Random-increment bound; only for `fairbench-rand`.
    pub k: Option<u64>,
    pub seed: u64,
    pub repeats: u32,
    pub block_capacity: usize,
}

impl BenchSpec {
    pub fn new(bench: BenchId, structure: StructureId, n: usize) -> Self {
        Self {
            bench,
            structure,
            n,
            k: if bench.uses_k() { Some(32) } else { None },
            seed: 1,
            repeats: 5,
            block_capacity: crate::block::DEFAULT_BLOCK_CAPACITY,
        }
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_repeats(mut self, repeats: u32) -> Self {
        self.repeats = repeats;
        self
    }

    pub fn with_block_capacity(mut self, block_capacity: usize) -> Self {
        self.block_capacity = block_capacity;
        self
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let min_n = self.bench.min_n();
        if self.n < min_n {
            return Err(BenchError::InvalidSpec(format!(
                "{} needs n >= {min_n}, got {}",
                self.bench, self.n
            )));
        }
        if self.repeats == 0 {
            return Err(BenchError::InvalidSpec("repeats must be at least 1".into()));
        }
        match (self.bench.uses_k(), self.k) {
            (true, Some(k)) if ALLOWED_K.contains(&k) => {}
            (true, Some(k)) => {
                return Err(BenchError::InvalidSpec(format!(
                    "k must be one of 32, 64, 128, got {k}"
                )))
            }
            (true, None) => return Err(BenchError::InvalidSpec("fairbench-rand needs k".into())),
            (false, Some(_)) => {
                return Err(BenchError::InvalidSpec(format!(
                    "{} takes no k",
                    self.bench
                )))
            }
            (false, None) => {}
        }
        validate_block_capacity(self.block_capacity)?;
        check_admissible(self.bench, self.structure, self.n)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchResult {
    pub spec: BenchSpec,
    /// Nanoseconds of the fastest repeat.
    pub min_ticks: u64,
    pub checksum: u64,
    pub model_bytes: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Contract(#[from] SeqError),
    #[error(transparent)]
    Inadmissible(#[from] Inadmissible),
    #[error(transparent)]
    BlockCapacity(#[from] BlockCapacityError),
    #[error(transparent)]
    ZeroBound(#[from] ZeroBound),
    #[error("invalid bench spec: {0}")]
    InvalidSpec(String),
    #[error("checksum changed between repeats ({first} then {later})")]
    Nondeterministic { first: u64, later: u64 },
    /// The deadline passed before the body finished.
    #[error("time budget exceeded")]
    Cutoff,
}

/// Runs one benchmark body on a fresh structure, with the given PRNG.
pub fn run_body(
    spec: &BenchSpec,
    rng: &mut Prng,
    deadline: Deadline,
) -> Result<BenchOutput, BenchError> {
    macro_rules! on {
        ($seq:expr) => {{
            let mut seq = $seq;
            let out = match spec.bench {
                BenchId::Stroustrup => {
                    algos::stroustrup(&mut seq, spec.n, rng, Search::Linear, deadline)
                }
                BenchId::StroustrupBinary => {
                    algos::stroustrup(&mut seq, spec.n, rng, Search::Binary, deadline)
                }
                BenchId::Fairbench => {
                    algos::fairbench(&mut seq, spec.n, rng, Increment::Unit, deadline)
                }
                BenchId::FairbenchRand => {
                    let k = spec
                        .k
                        .ok_or_else(|| BenchError::InvalidSpec("fairbench-rand needs k".into()))?;
                    algos::fairbench(&mut seq, spec.n, rng, Increment::Random(k), deadline)
                }
                BenchId::AddLast => algos::endgame(&mut seq, spec.n, rng, End::Last, deadline),
                BenchId::AddFirst => algos::endgame(&mut seq, spec.n, rng, End::First, deadline),
            };
            out
        }};
    }
    match spec.structure {
        StructureId::NoCacheList => on!(NoCacheList::new()),
        StructureId::LinkedList => on!(LinkedList::new()),
        StructureId::SingleList => on!(SingleList::new()),
        StructureId::ArrayList => on!(ArrayList::new()),
        StructureId::ArrayRing => on!(ArrayRing::new()),
        StructureId::ArrayBlock => on!(ArrayBlock::with_block_capacity(spec.block_capacity)?),
        StructureId::Oracle => on!(OracleList::new()),
    }
}

/// Outcome of a run under a time budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Timed {
    Completed(BenchResult),
    /// Every repeat ran past the budget; `ticks` is the shortest such run,
    /// a lower bound on the true minimum.
    Exceeded {
        ticks: u64,
    },
}

impl Timed {
    /// Measured minimum, or the lower bound when the budget was exceeded.
    pub fn ticks(&self) -> u64 {
        match self {
            Timed::Completed(r) => r.min_ticks,
            Timed::Exceeded { ticks } => *ticks,
        }
    }

    pub fn completed(&self) -> Option<&BenchResult> {
        match self {
            Timed::Completed(r) => Some(r),
            Timed::Exceeded { .. } => None,
        }
    }
}

fn nanos(d: Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

/// Runs `spec.repeats` timed repeats, each cut off once it runs longer than
/// `budget` or than the fastest repeat so far (it could no longer change
/// the minimum).
pub fn run_bench_budgeted(spec: &BenchSpec, budget: Duration) -> Result<Timed, BenchError> {
    spec.validate()?;
    let mut best: Option<(u64, BenchOutput)> = None;
    let mut shortest_cut = u64::MAX;
    for _ in 0..spec.repeats {
        let limit = match best {
            Some((ticks, _)) => budget.min(Duration::from_nanos(ticks)),
            None => budget,
        };
        let mut rng = Prng::new(spec.seed);
        let start = Instant::now();
        let deadline = Deadline(start.checked_add(limit));
        let outcome = run_body(spec, &mut rng, deadline);
        let ticks = nanos(start.elapsed());
        match outcome {
            Ok(out) => {
                if let Some((_, first)) = best {
                    if first.checksum != out.checksum {
                        return Err(BenchError::Nondeterministic {
                            first: first.checksum,
                            later: out.checksum,
                        });
                    }
                }
                if best.is_none_or(|(t, _)| ticks < t) {
                    best = Some((ticks, out));
                }
            }
            Err(BenchError::Cutoff) => shortest_cut = shortest_cut.min(ticks),
            Err(e) => return Err(e),
        }
    }
    Ok(match best {
        Some((min_ticks, out)) => Timed::Completed(BenchResult {
            spec: spec.clone(),
            min_ticks,
            checksum: out.checksum,
            model_bytes: out.peak_bytes,
        }),
        None => Timed::Exceeded {
            ticks: shortest_cut,
        },
    })
}

/// Runs `spec` to completion and reports the minimum over its repeats.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchResult, BenchError> {
    // A year is as good as no budget.
    match run_bench_budgeted(spec, Duration::from_secs(365 * 24 * 3600))? {
        Timed::Completed(r) => Ok(r),
        Timed::Exceeded { .. } => Err(BenchError::Cutoff),
    }
}
