//! Reference list used as the equivalence baseline.

use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

/// A plain growable vector used naively: every insert and remove shifts.
#[derive(Debug, Clone, Default)]
pub struct OracleList {
    items: Vec<Element>,
}

impl OracleList {
    /// Words in the fixed header: storage pointer, capacity, length.
    pub const HEADER_WORDS: usize = 3;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.items
    }
}

impl Sequence for OracleList {
    fn size(&self) -> usize {
        self.items.len()
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.items.len())?;
        Ok(self.items[idx])
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.items.len())?;
        self.items.try_reserve(1).map_err(|_| SeqError::Alloc)?;
        self.items.insert(idx, value);
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.items.len())?;
        Ok(self.items.remove(idx))
    }

    fn footprint_bytes(&self) -> usize {
        (Self::HEADER_WORDS + self.items.capacity()) * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        self.items.clone()
    }

    fn counters(&self) -> Counters {
        Counters::default()
    }

    fn reset_counters(&mut self) {}
}
