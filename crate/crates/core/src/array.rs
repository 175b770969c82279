//! Contiguous array representations: `ArrayList` and `ArrayRing`.
//!
//! Both keep a power-of-two capacity, allocated lazily at 16 slots and
//! doubled when full. Neither shrinks.

use crate::ring;
use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

pub const MIN_CAPACITY: usize = 16;

fn alloc_storage(capacity: usize) -> Result<Box<[Element]>, SeqError> {
    let mut v: Vec<Element> = Vec::new();
    v.try_reserve_exact(capacity).map_err(|_| SeqError::Alloc)?;
    v.resize(capacity, 0);
    Ok(v.into_boxed_slice())
}

fn grown_capacity(capacity: usize) -> usize {
    (capacity * 2).max(MIN_CAPACITY)
}

/// Left-aligned array with a reserve area on the right.
#[derive(Debug, Clone)]
pub struct ArrayList {
    storage: Box<[Element]>,
    size: usize,
    counters: Counters,
}

/// Capacity is unallocated or a power of two of at least `MIN_CAPACITY`,
/// and holds `size`.
fn check_storage(capacity: usize, size: usize) -> Result<(), String> {
    if capacity != 0 && !(capacity.is_power_of_two() && capacity >= MIN_CAPACITY) {
        return Err(format!(
            "capacity {capacity} is not a power of two >= {MIN_CAPACITY}"
        ));
    }
    if size > capacity {
        return Err(format!("size {size} exceeds capacity {capacity}"));
    }
    Ok(())
}

impl Default for ArrayList {
    fn default() -> Self {
        Self::new()
    }
}

impl ArrayList {
    /// storage, capacity, size
    pub const HEADER_WORDS: usize = 3;

    pub fn new() -> Self {
        Self {
            storage: Box::default(),
            size: 0,
            counters: Counters::default(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.storage.len()
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        check_storage(self.capacity(), self.size)
    }

    fn grow(&mut self) -> Result<(), SeqError> {
        let mut next = alloc_storage(grown_capacity(self.capacity()))?;
        next[..self.size].copy_from_slice(&self.storage[..self.size]);
        self.storage = next;
        Ok(())
    }
}

impl Sequence for ArrayList {
    fn size(&self) -> usize {
        self.size
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        Ok(self.storage[idx])
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.size)?;
        if self.size == self.capacity() {
            self.grow()?;
        }
        self.storage.copy_within(idx..self.size, idx + 1);
        self.storage[idx] = value;
        self.counters.moves += (self.size - idx) as u64;
        self.size += 1;
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        let value = self.storage[idx];
        self.storage.copy_within(idx + 1..self.size, idx);
        self.counters.moves += (self.size - 1 - idx) as u64;
        self.size -= 1;
        Ok(value)
    }

    fn footprint_bytes(&self) -> usize {
        (Self::HEADER_WORDS + self.capacity()) * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        self.storage[..self.size].to_vec()
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }
}

/// Array used circularly; `lower` is the slot of user index 0.
#[derive(Debug, Clone)]
pub struct ArrayRing {
    storage: Box<[Element]>,
    size: usize,
    lower: usize,
    counters: Counters,
}

impl Default for ArrayRing {
    fn default() -> Self {
        Self::new()
    }
}

impl ArrayRing {
    /// storage, capacity, size, lower
    pub const HEADER_WORDS: usize = 4;

    pub fn new() -> Self {
        Self {
            storage: Box::default(),
            size: 0,
            lower: 0,
            counters: Counters::default(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.storage.len()
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        check_storage(self.capacity(), self.size)?;
        if self.lower >= self.capacity().max(1) {
            return Err(format!(
                "lower {} outside capacity {}",
                self.lower,
                self.capacity()
            ));
        }
        Ok(())
    }

    /// Internal slot of user index `u`, for `u` in `[0, size]`.
    #[inline]
    pub fn ring_index(&self, u: usize) -> usize {
        ring::mask_index(self.lower, u, self.capacity())
    }

    /// Moves the contents to a buffer twice as large, starting at slot 0.
    fn grow(&mut self) -> Result<(), SeqError> {
        let mut next = alloc_storage(grown_capacity(self.capacity()))?;
        if self.size > 0 {
            ring::copy_between(&self.storage, self.lower, 0, &mut next, 0, 0, self.size);
        }
        self.storage = next;
        self.lower = 0;
        Ok(())
    }
}

impl Sequence for ArrayRing {
    fn size(&self) -> usize {
        self.size
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        Ok(self.storage[self.ring_index(idx)])
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.size)?;
        if self.size == self.capacity() {
            self.grow()?;
        }
        let cap = self.capacity();
        if idx < self.size - idx {
            ring::shift_left(&mut self.storage, self.lower, 0, idx);
            self.lower = ring::wrap_back(self.lower, 1, cap);
            self.counters.moves += idx as u64;
        } else {
            ring::shift_right(&mut self.storage, self.lower, idx, self.size - idx);
            self.counters.moves += (self.size - idx) as u64;
        }
        let slot = self.ring_index(idx);
        self.storage[slot] = value;
        self.size += 1;
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        let value = self.storage[self.ring_index(idx)];
        let tail = self.size - 1 - idx;
        if idx < tail {
            ring::shift_right(&mut self.storage, self.lower, 0, idx);
            self.lower = ring::mask_index(self.lower, 1, self.capacity());
            self.counters.moves += idx as u64;
        } else {
            ring::shift_left(&mut self.storage, self.lower, idx + 1, tail);
            self.counters.moves += tail as u64;
        }
        self.size -= 1;
        Ok(value)
    }

    fn footprint_bytes(&self) -> usize {
        (Self::HEADER_WORDS + self.capacity()) * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.size);
        ring::extend_from_ring(&mut out, &self.storage, self.lower, self.size);
        out
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }
}
