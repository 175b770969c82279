use std::ptr::NonNull;

use super::{DoublyChain, DoublyLink, DOUBLY_LINK_WORDS};
use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

/// Doubly linked list with a cache of the last visited index.
///
/// A locate walks from whichever of the first link, the last link or the
/// cached link is closest to the requested index. Ties prefer the cache,
/// then the first link. Structural operations re-anchor the cache: an
/// insert points it at the new cell, a removal at the successor (or the
/// predecessor when the last cell was removed).
pub struct LinkedList {
    chain: DoublyChain,
    cache: Option<(usize, NonNull<DoublyLink>)>,
    counters: Counters,
}

// SAFETY: the cached handle points into the chain owned by this list.
unsafe impl Send for LinkedList {}

impl Default for LinkedList {
    fn default() -> Self {
        Self::new()
    }
}

impl LinkedList {
    /// first link, last link, size, cache link, cache index
    pub const HEADER_WORDS: usize = 5;

    pub fn new() -> Self {
        Self {
            chain: DoublyChain::new(),
            cache: None,
            counters: Counters::default(),
        }
    }

    /// User index currently held by the index cache.
    pub fn cache_index(&self) -> Option<usize> {
        self.cache.map(|(idx, _)| idx)
    }

    fn locate(&mut self, idx: usize) -> NonNull<DoublyLink> {
        let from_first = idx;
        let from_last = self.chain.size() - 1 - idx;
        let link = match self.cache {
            Some((cidx, clink)) if cidx.abs_diff(idx) <= from_first.min(from_last) => {
                self.counters.cache_hits += 1;
                self.counters.steps += cidx.abs_diff(idx) as u64;
                if idx >= cidx {
                    DoublyChain::forward(clink, idx - cidx)
                } else {
                    DoublyChain::backward(clink, cidx - idx)
                }
            }
            _ if from_first <= from_last => {
                self.counters.steps += from_first as u64;
                DoublyChain::forward(self.chain.first(), from_first)
            }
            _ => {
                self.counters.steps += from_last as u64;
                DoublyChain::backward(self.chain.last(), from_last)
            }
        };
        self.cache = Some((idx, link));
        link
    }

    /// Verifies chain integrity and cache coherence.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.chain.check()?;
        match self.cache {
            Some((idx, link)) => match self.chain.position_of(link) {
                Some(pos) if pos == idx => Ok(()),
                Some(pos) => Err(format!("cache index {idx} but cached cell is at {pos}")),
                None => Err("cached cell is not in the chain".into()),
            },
            None => Ok(()),
        }
    }
}

impl Sequence for LinkedList {
    fn size(&self) -> usize {
        self.chain.size()
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.chain.size())?;
        Ok(DoublyChain::value(self.locate(idx)))
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.chain.size())?;
        let cell = if idx == self.chain.size() {
            self.chain.push_back(value)?
        } else {
            let at = self.locate(idx);
            self.chain.link_before(at, value)?
        };
        self.cache = Some((idx, cell));
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.chain.size())?;
        let link = self.locate(idx);
        let (value, prev, next) = self.chain.unlink(link);
        self.cache = match (next, prev) {
            (Some(n), _) => Some((idx, n)),
            (None, Some(p)) => Some((idx - 1, p)),
            (None, None) => None,
        };
        Ok(value)
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

#[cfg(test)]
mod tests {
    use super::*;

    fn list(n: i64) -> LinkedList {
        let mut l = LinkedList::new();
        for i in 0..n {
            l.add_last(i).unwrap();
        }
        l
    }

    #[test]
    fn walks_from_cache_in_both_directions() {
        let mut l = list(1000);
        l.item(50).unwrap();
        l.reset_counters();
        assert_eq!(l.item(52), Ok(52));
        assert_eq!(l.counters().steps, 2);
        assert_eq!(l.counters().cache_hits, 1);
        l.item(50).unwrap();
        l.reset_counters();
        assert_eq!(l.item(48), Ok(48));
        assert_eq!(l.counters().steps, 2);
        assert_eq!(l.cache_index(), Some(48));
    }

    #[test]
    fn ascending_scan_is_one_step_per_access() {
        let mut l = list(100_000);
        l.item(0).unwrap();
        l.reset_counters();
        for idx in 1..100_000 {
            l.item(idx).unwrap();
        }
        // the final access sits on the last anchor and is free
        assert_eq!(l.counters().steps, 100_000 - 2);
        l.reset_counters();
        for idx in (0..100_000 - 1).rev() {
            l.item(idx).unwrap();
        }
        assert_eq!(l.counters().steps, 100_000 - 2);
    }

    #[test]
    fn insert_points_cache_at_new_cell() {
        let mut l = LinkedList::new();
        for v in [1, 2, 4] {
            l.add_last(v).unwrap();
        }
        l.item(1).unwrap();
        l.insert(2, 3).unwrap();
        assert_eq!(l.to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(l.cache_index(), Some(2));
        l.reset_counters();
        assert_eq!(l.item(2), Ok(3));
        assert_eq!(l.counters().steps, 0);
        l.check_invariants().unwrap();
    }

    #[test]
    fn remove_reanchors_cache() {
        let mut l = list(5);
        l.remove(2).unwrap();
        assert_eq!(l.cache_index(), Some(2));
        assert_eq!(l.item(2), Ok(3));
        l.remove_last().unwrap();
        assert_eq!(l.cache_index(), Some(2));
        l.check_invariants().unwrap();
        while !l.is_empty() {
            l.remove_first().unwrap();
            l.check_invariants().unwrap();
        }
        assert_eq!(l.cache_index(), None);
    }

    #[test]
    fn footprint_counts_cache_words() {
        assert_eq!(list(1000).footprint_bytes(), 24_000 + 40);
    }
}
