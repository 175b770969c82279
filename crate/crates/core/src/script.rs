//! Randomized operation scripts and result digests for equivalence testing.

use crate::block::BlockCapacityError;
use crate::prng::Prng;
use crate::sequence::{new_sequence, Element, SeqError, Sequence, StructureId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Item(usize),
    Insert(usize, Element),
    Remove(usize),
    AddFirst(Element),
    AddLast(Element),
    RemoveFirst,
    RemoveLast,
}

/// Mix of operations a script draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptKind {
    /// Every operation, with adds slightly outweighing removes.
    Mixed,
    /// Only the end operations plus reads, alternating sides at random.
    Ends,
    /// Pure `add_last`.
    AppendOnly,
}

/// A generated operation sequence. Every index is valid for the list state
/// at the step where it is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpScript {
    pub seed: u64,
    pub ops: Vec<Op>,
}

impl OpScript {
    pub fn generate(seed: u64, len: usize, kind: ScriptKind) -> Self {
        let mut rng = Prng::new(seed);
        let mut size = 0usize;
        let mut ops = Vec::with_capacity(len);
        for _ in 0..len {
            let value = rng.value62();
            let roll = rng.rand_u64() % 100;
            let op = match kind {
                ScriptKind::AppendOnly => Op::AddLast(value),
                ScriptKind::Ends => match roll {
                    _ if size == 0 && roll < 50 => Op::AddFirst(value),
                    _ if size == 0 => Op::AddLast(value),
                    0..=29 => Op::Item(rng.rand_u64() as usize % size),
                    30..=49 => Op::AddFirst(value),
                    50..=69 => Op::AddLast(value),
                    70..=84 => Op::RemoveFirst,
                    _ => Op::RemoveLast,
                },
                ScriptKind::Mixed => match roll {
                    _ if size == 0 && roll < 50 => Op::Insert(0, value),
                    _ if size == 0 => Op::AddLast(value),
                    0..=29 => Op::Item(rng.rand_u64() as usize % size),
                    30..=49 => Op::Insert(rng.rand_u64() as usize % (size + 1), value),
                    50..=59 => Op::AddFirst(value),
                    60..=69 => Op::AddLast(value),
                    70..=84 => Op::Remove(rng.rand_u64() as usize % size),
                    85..=92 => Op::RemoveFirst,
                    _ => Op::RemoveLast,
                },
            };
            size = match op {
                Op::Item(_) => size,
                Op::Insert(..) | Op::AddFirst(_) | Op::AddLast(_) => size + 1,
                Op::Remove(_) | Op::RemoveFirst | Op::RemoveLast => size - 1,
            };
            ops.push(op);
        }
        Self { seed, ops }
    }
}

/// Summary of a script run: final size, an order-sensitive hash of the final
/// contents, and a running hash of every value read or removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Digest {
    pub size: usize,
    pub contents: u64,
    pub reads: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

#[inline]
fn mix(h: u64, v: Element) -> u64 {
    (h ^ v as u64).wrapping_mul(FNV_PRIME)
}

/// Order-sensitive hash of a sequence of elements.
pub fn hash_elements(values: &[Element]) -> u64 {
    values.iter().fold(FNV_OFFSET, |h, &v| mix(h, v))
}

/// Applies `script` to `seq` and returns its digest.
pub fn apply_script<S: Sequence + ?Sized>(
    seq: &mut S,
    script: &OpScript,
) -> Result<Digest, SeqError> {
    let mut reads = FNV_OFFSET;
    for &op in &script.ops {
        match op {
            Op::Item(i) => reads = mix(reads, seq.item(i)?),
            Op::Insert(i, v) => seq.insert(i, v)?,
            Op::Remove(i) => reads = mix(reads, seq.remove(i)?),
            Op::AddFirst(v) => seq.add_first(v)?,
            Op::AddLast(v) => seq.add_last(v)?,
            Op::RemoveFirst => reads = mix(reads, seq.remove_first()?),
            Op::RemoveLast => reads = mix(reads, seq.remove_last()?),
        }
    }
    Ok(Digest {
        size: seq.size(),
        contents: hash_elements(&seq.to_vec()),
        reads,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ScriptError {
    #[error(transparent)]
    Config(#[from] BlockCapacityError),
    #[error(transparent)]
    Contract(#[from] SeqError),
}

/// Runs `script` on a fresh sequence of kind `id`.
pub fn run_script(
    id: StructureId,
    block_capacity: usize,
    script: &OpScript,
) -> Result<Digest, ScriptError> {
    let mut seq = new_sequence(id, block_capacity)?;
    Ok(apply_script(seq.as_mut(), script)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::OracleList;

    #[test]
    fn empty_script_digest() {
        let script = OpScript {
            seed: 0,
            ops: vec![],
        };
        let d = apply_script(&mut OracleList::new(), &script).unwrap();
        assert_eq!(
            d,
            Digest {
                size: 0,
                contents: FNV_OFFSET,
                reads: FNV_OFFSET
            }
        );
    }

    #[test]
    fn generated_indices_are_valid() {
        for kind in [ScriptKind::Mixed, ScriptKind::Ends, ScriptKind::AppendOnly] {
            let script = OpScript::generate(11, 5000, kind);
            let mut oracle = OracleList::new();
            apply_script(&mut oracle, &script).unwrap();
        }
    }

    #[test]
    fn size_is_adds_minus_removes() {
        let script = OpScript::generate(5, 20_000, ScriptKind::Mixed);
        let adds = script
            .ops
            .iter()
            .filter(|op| matches!(op, Op::Insert(..) | Op::AddFirst(_) | Op::AddLast(_)))
            .count();
        let removes = script
            .ops
            .iter()
            .filter(|op| matches!(op, Op::Remove(_) | Op::RemoveFirst | Op::RemoveLast))
            .count();
        let d = apply_script(&mut OracleList::new(), &script).unwrap();
        assert_eq!(d.size, adds - removes);
    }

    #[test]
    fn hash_is_order_sensitive() {
        assert_ne!(hash_elements(&[1, 2]), hash_elements(&[2, 1]));
    }
}
