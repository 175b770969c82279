//! The indexed-sequence contract shared by every list representation.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Payload stored in every sequence: one machine word.
pub type Element = i64;

/// Bytes per machine word in the footprint model.
pub const WORD_BYTES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("index {index} out of range for sequence of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("cannot remove from an empty sequence")]
    Underflow,
    #[error("allocation failed")]
    Alloc,
}

/// Work counters kept by every structure.
///
/// Each counter is bumped once per operation with a precomputed amount, so
/// keeping them live costs one add per call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// Links (or blocks, for `ArrayBlock`) walked while locating an index.
    pub steps: u64,
    /// Elements relocated inside storage areas.
    pub moves: u64,
    /// Block handles shifted inside the `ArrayBlock` primary table.
    pub primary_moves: u64,
    pub splits: u64,
    pub merges: u64,
    /// Locates that started from the index cache.
    pub cache_hits: u64,
}

/// Uniform indexed interface implemented by all list representations.
///
/// Indices are 0-based. `item` takes `&mut self` because the cached
/// representations update their index cache on every access.
pub trait Sequence {
    fn size(&self) -> usize;

    fn item(&mut self, idx: usize) -> Result<Element, SeqError>;

    /// Inserts `value` so that it ends up at `idx`; `idx == size` appends.
    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError>;

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError>;

    fn add_first(&mut self, value: Element) -> Result<(), SeqError> {
        self.insert(0, value)
    }

    fn add_last(&mut self, value: Element) -> Result<(), SeqError> {
        let n = self.size();
        self.insert(n, value)
    }

    fn remove_first(&mut self) -> Result<Element, SeqError> {
        if self.size() == 0 {
            return Err(SeqError::Underflow);
        }
        self.remove(0)
    }

    fn remove_last(&mut self) -> Result<Element, SeqError> {
        match self.size() {
            0 => Err(SeqError::Underflow),
            n => self.remove(n - 1),
        }
    }

    /// Modeled heap bytes: 8 bytes per word, allocator metadata excluded.
    fn footprint_bytes(&self) -> usize;

    /// Contents in user order, read without touching caches or counters.
    fn to_vec(&self) -> Vec<Element>;

    fn counters(&self) -> Counters;

    fn reset_counters(&mut self);

    fn is_empty(&self) -> bool {
        self.size() == 0
    }
}

pub(crate) fn check_index(idx: usize, size: usize) -> Result<(), SeqError> {
    if idx < size {
        Ok(())
    } else {
        Err(SeqError::IndexOutOfRange { index: idx, size })
    }
}

pub(crate) fn check_insert_index(idx: usize, size: usize) -> Result<(), SeqError> {
    if idx <= size {
        Ok(())
    } else {
        Err(SeqError::IndexOutOfRange { index: idx, size })
    }
}

/// Names of the available representations, as used on the command line and
/// in CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureId {
    NoCacheList,
    LinkedList,
    SingleList,
    ArrayList,
    ArrayRing,
    ArrayBlock,
    Oracle,
}

impl StructureId {
    pub const ALL: [StructureId; 7] = [
        StructureId::NoCacheList,
        StructureId::LinkedList,
        StructureId::SingleList,
        StructureId::ArrayList,
        StructureId::ArrayRing,
        StructureId::ArrayBlock,
        StructureId::Oracle,
    ];

    /// The six representations under study, without the oracle.
    pub const STUDIED: [StructureId; 6] = [
        StructureId::NoCacheList,
        StructureId::LinkedList,
        StructureId::SingleList,
        StructureId::ArrayList,
        StructureId::ArrayRing,
        StructureId::ArrayBlock,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureId::NoCacheList => "nocachelist",
            StructureId::LinkedList => "linkedlist",
            StructureId::SingleList => "singlelist",
            StructureId::ArrayList => "arraylist",
            StructureId::ArrayRing => "arrayring",
            StructureId::ArrayBlock => "arrayblock",
            StructureId::Oracle => "oracle",
        }
    }
}

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown structure id `{0}`")]
pub struct UnknownStructure(pub String);

impl FromStr for StructureId {
    type Err = UnknownStructure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StructureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| UnknownStructure(s.to_string()))
    }
}

/// Builds an empty sequence of the given kind behind a trait object.
///
/// `block_capacity` only affects `ArrayBlock`.
pub fn new_sequence(
    id: StructureId,
    block_capacity: usize,
) -> Result<Box<dyn Sequence + Send>, crate::block::BlockCapacityError> {
    use crate::{array, block, linked, oracle};
    Ok(match id {
        StructureId::NoCacheList => Box::new(linked::NoCacheList::new()),
        StructureId::LinkedList => Box::new(linked::LinkedList::new()),
        StructureId::SingleList => Box::new(linked::SingleList::new()),
        StructureId::ArrayList => Box::new(array::ArrayList::new()),
        StructureId::ArrayRing => Box::new(array::ArrayRing::new()),
        StructureId::ArrayBlock => {
            Box::new(block::ArrayBlock::with_block_capacity(block_capacity)?)
        }
        StructureId::Oracle => Box::new(oracle::OracleList::new()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in StructureId::ALL {
            assert_eq!(id.as_str().parse::<StructureId>().unwrap(), id);
        }
        assert!("vector".parse::<StructureId>().is_err());
    }

    #[test]
    fn index_checks() {
        assert!(check_index(0, 1).is_ok());
        assert_eq!(
            check_index(1, 1),
            Err(SeqError::IndexOutOfRange { index: 1, size: 1 })
        );
        assert!(check_insert_index(1, 1).is_ok());
        assert!(check_insert_index(2, 1).is_err());
    }
}
