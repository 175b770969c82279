//! The benchmark bodies, generic over the sequence under test.
//!
//! Every body reads and writes only through the [`Sequence`] contract, so
//! the same code runs against every representation. Values inserted by the
//! fairbench are `someData(i) = i`; the other benchmarks insert random
//! non-negative values below 2^62.

use std::time::Instant;

use super::BenchError;
use crate::prng::Prng;
use crate::sequence::{Element, Sequence};

/// Optional wall-clock cutoff polled inside the benchmark loops.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(pub Option<Instant>);

impl Deadline {
    pub const NONE: Deadline = Deadline(None);

    #[inline]
    fn check(self, iteration: usize, stride_mask: usize) -> Result<(), BenchError> {
        if let Some(at) = self.0 {
            if iteration & stride_mask == 0 && Instant::now() >= at {
                return Err(BenchError::Cutoff);
            }
        }
        Ok(())
    }
}

/// Iterations between clock polls in the cheap-per-iteration loops.
const POLL_MASK: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOutput {
    pub checksum: u64,
    /// `footprint_bytes` right after the fill phase, at peak size.
    pub peak_bytes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// Walk from index 0 while elements are smaller.
    Linear,
    /// Lower-bound binary search over `item`.
    Binary,
}

/// Index of the first element that is not smaller than `value`.
pub fn insertion_index<S: Sequence + ?Sized>(
    seq: &mut S,
    value: Element,
    search: Search,
) -> Result<usize, BenchError> {
    match search {
        Search::Linear => {
            let size = seq.size();
            let mut idx = 0;
            while idx < size && seq.item(idx)? < value {
                idx += 1;
            }
            Ok(idx)
        }
        Search::Binary => {
            let (mut lo, mut hi) = (0, seq.size());
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if seq.item(mid)? < value {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            Ok(lo)
        }
    }
}

/// One step of the sorted fill: draw a value and insert it in order.
#[inline]
pub fn sorted_insert_step<S: Sequence + ?Sized>(
    seq: &mut S,
    rng: &mut Prng,
    search: Search,
) -> Result<(), BenchError> {
    let value = rng.value62();
    let idx = insertion_index(seq, value, search)?;
    seq.insert(idx, value)?;
    Ok(())
}

/// Sorted fill followed by `n` removals at random indices. The checksum is
/// the wrapping sum of the removed values.
pub fn stroustrup<S: Sequence + ?Sized>(
    seq: &mut S,
    n: usize,
    rng: &mut Prng,
    search: Search,
    deadline: Deadline,
) -> Result<BenchOutput, BenchError> {
    for i in 0..n {
        deadline.check(i, 0)?;
        sorted_insert_step(seq, rng, search)?;
    }
    let peak_bytes = seq.footprint_bytes() as u64;
    let mut checksum = 0u64;
    for i in 0..n {
        deadline.check(i, 0)?;
        let idx = rng.index_below(seq.size())?;
        checksum = checksum.wrapping_add(seq.remove(idx)? as u64);
    }
    Ok(BenchOutput {
        checksum,
        peak_bytes,
    })
}

/// How the fairbench cursor moves between middle inserts and removals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Increment {
    Unit,
    /// Uniform in `[1, k]`.
    Random(u64),
}

impl Increment {
    #[inline]
    fn draw(self, rng: &mut Prng) -> Result<usize, BenchError> {
        Ok(match self {
            Increment::Unit => 1,
            Increment::Random(k) => rng.rand_below(k)? as usize + 1,
        })
    }
}

/// Fairbench step 1: a third by `add_last`, a third by `add_first`, and the
/// last third inserted at a cursor advancing through the list.
///
/// The thirds are decided with exact integer comparisons `3i < n` and
/// `3i < 2n`. The cursor wraps modulo `size + 1`.
pub fn fairbench_fill<S: Sequence + ?Sized>(
    seq: &mut S,
    n: usize,
    rng: &mut Prng,
    incr: Increment,
    deadline: Deadline,
) -> Result<(), BenchError> {
    let mut idx = 0usize;
    for i in 1..=n {
        deadline.check(i, POLL_MASK)?;
        let value = i as Element;
        if 3 * i < n {
            seq.add_last(value)?;
        } else if 3 * i < 2 * n {
            seq.add_first(value)?;
        } else {
            idx = (idx + incr.draw(rng)?) % (seq.size() + 1);
            seq.insert(idx, value)?;
        }
    }
    Ok(())
}

/// Fairbench step 3: removals at a cursor retreating from `n / 2` (wrapping
/// modulo `size`), then `remove_first`, then `remove_last`.
pub fn fairbench_clear<S: Sequence + ?Sized>(
    seq: &mut S,
    n: usize,
    rng: &mut Prng,
    incr: Increment,
    deadline: Deadline,
) -> Result<(), BenchError> {
    let mut idx = n / 2;
    for i in 1..=n {
        deadline.check(i, POLL_MASK)?;
        if 3 * i < n {
            let size = seq.size();
            let step = incr.draw(rng)? % size;
            idx = (idx % size + size - step) % size;
            seq.remove(idx)?;
        } else if 3 * i < 2 * n {
            seq.remove_first()?;
        } else {
            seq.remove_last()?;
        }
    }
    Ok(())
}

/// Sum of all elements, read from the last index down to 0.
pub fn sum_right_to_left<S: Sequence + ?Sized>(
    seq: &mut S,
    deadline: Deadline,
) -> Result<u64, BenchError> {
    let mut sum = 0u64;
    for idx in (0..seq.size()).rev() {
        deadline.check(idx, POLL_MASK)?;
        sum = sum.wrapping_add(seq.item(idx)? as u64);
    }
    Ok(sum)
}

/// Sum of all elements, read from index 0 upward.
pub fn sum_left_to_right<S: Sequence + ?Sized>(
    seq: &mut S,
    deadline: Deadline,
) -> Result<u64, BenchError> {
    let mut sum = 0u64;
    for idx in 0..seq.size() {
        deadline.check(idx, POLL_MASK)?;
        sum = sum.wrapping_add(seq.item(idx)? as u64);
    }
    Ok(sum)
}

pub fn fairbench<S: Sequence + ?Sized>(
    seq: &mut S,
    n: usize,
    rng: &mut Prng,
    incr: Increment,
    deadline: Deadline,
) -> Result<BenchOutput, BenchError> {
    if n < 3 {
        return Err(BenchError::InvalidSpec(format!(
            "fairbench needs n >= 3, got {n}"
        )));
    }
    fairbench_fill(seq, n, rng, incr, deadline)?;
    let peak_bytes = seq.footprint_bytes() as u64;
    let checksum = sum_right_to_left(seq, deadline)?;
    fairbench_clear(seq, n, rng, incr, deadline)?;
    Ok(BenchOutput {
        checksum,
        peak_bytes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    First,
    Last,
}

/// Fill `n` random values at one end, sum left to right, empty from the
/// same end.
pub fn endgame<S: Sequence + ?Sized>(
    seq: &mut S,
    n: usize,
    rng: &mut Prng,
    end: End,
    deadline: Deadline,
) -> Result<BenchOutput, BenchError> {
    for i in 0..n {
        deadline.check(i, POLL_MASK)?;
        let value = rng.value62();
        match end {
            End::First => seq.add_first(value)?,
            End::Last => seq.add_last(value)?,
        }
    }
    let peak_bytes = seq.footprint_bytes() as u64;
    let checksum = sum_left_to_right(seq, deadline)?;
    for i in 0..n {
        deadline.check(i, POLL_MASK)?;
        match end {
            End::First => seq.remove_first()?,
            End::Last => seq.remove_last()?,
        };
    }
    Ok(BenchOutput {
        checksum,
        peak_bytes,
    })
}
