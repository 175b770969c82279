use std::ptr::NonNull;

use super::{DoublyChain, DoublyLink, DOUBLY_LINK_WORDS};
use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

/// Doubly linked list whose only cache is its size.
///
/// Indexed access walks from whichever end is nearer.
pub struct NoCacheList {
    chain: DoublyChain,
    counters: Counters,
}

impl Default for NoCacheList {
    fn default() -> Self {
        Self::new()
    }
}

impl NoCacheList {
    /// first link, last link, size
    pub const HEADER_WORDS: usize = 3;

    pub fn new() -> Self {
        Self {
            chain: DoublyChain::new(),
            counters: Counters::default(),
        }
    }

    fn locate(&mut self, idx: usize) -> NonNull<DoublyLink> {
        let from_last = self.chain.size() - 1 - idx;
        if idx <= from_last {
            self.counters.steps += idx as u64;
            DoublyChain::forward(self.chain.first(), idx)
        } else {
            self.counters.steps += from_last as u64;
            DoublyChain::backward(self.chain.last(), from_last)
        }
    }

    /// Verifies chain integrity.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.chain.check()
    }
}

impl Sequence for NoCacheList {
    fn size(&self) -> usize {
        self.chain.size()
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.chain.size())?;
        Ok(DoublyChain::value(self.locate(idx)))
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.chain.size())?;
        if idx == self.chain.size() {
            self.chain.push_back(value)?;
        } else {
            let at = self.locate(idx);
            self.chain.link_before(at, value)?;
        }
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.chain.size())?;
        let link = self.locate(idx);
        Ok(self.chain.unlink(link).0)
    }

    fn footprint_bytes(&self) -> usize {
        (Self::HEADER_WORDS + DOUBLY_LINK_WORDS * self.chain.size()) * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        self.chain.to_vec()
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }
}
