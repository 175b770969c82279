use std::ptr::NonNull;

use super::{alloc_cell, free_cell, SINGLY_LINK_WORDS};
use crate::sequence::{
    check_index, check_insert_index, Counters, Element, SeqError, Sequence, WORD_BYTES,
};

struct SinglyLink {
    value: Element,
    next: Option<NonNull<SinglyLink>>,
}

type Handle = NonNull<SinglyLink>;

#[inline]
fn next_of(link: Handle) -> Option<Handle> {
    // SAFETY: handles held by the list point at live cells.
    unsafe { (*link.as_ptr()).next }
}

#[inline]
fn set_next(link: Handle, next: Option<Handle>) {
    // SAFETY: as above.
    unsafe { (*link.as_ptr()).next = next }
}

#[inline]
fn value_of(link: Handle) -> Element {
    // SAFETY: as above.
    unsafe { (*link.as_ptr()).value }
}

/// One-way linked list with size and last-visited-index caches.
///
/// Only forward walks are possible: a locate starts from the cache when the
/// cached index is at or before the target, otherwise from the first link.
/// The last link is kept so appending is constant time; removing the last
/// element still has to walk to its predecessor.
pub struct SingleList {
    first: Option<Handle>,
    last: Option<Handle>,
    size: usize,
    cache: Option<(usize, Handle)>,
    counters: Counters,
}

// SAFETY: the list exclusively owns every cell reachable from `first`.
unsafe impl Send for SingleList {}

impl Default for SingleList {
    fn default() -> Self {
        Self::new()
    }
}

impl SingleList {
    /// first link, last link, size, cache link, cache index
    pub const HEADER_WORDS: usize = 5;

    pub fn new() -> Self {
        Self {
            first: None,
            last: None,
            size: 0,
            cache: None,
            counters: Counters::default(),
        }
    }

    pub fn cache_index(&self) -> Option<usize> {
        self.cache.map(|(idx, _)| idx)
    }

    fn locate(&mut self, idx: usize) -> Handle {
        let (mut link, steps) = match self.cache {
            Some((cidx, clink)) if cidx <= idx => {
                self.counters.cache_hits += 1;
                (clink, idx - cidx)
            }
            _ => (self.first.expect("non-empty list"), idx),
        };
        self.counters.steps += steps as u64;
        for _ in 0..steps {
            link = next_of(link).expect("walk stays inside the chain");
        }
        self.cache = Some((idx, link));
        link
    }

    /// Verifies chain length, the last handle and cache coherence.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut count = 0;
        let mut tail = None;
        let mut cur = self.first;
        while let Some(link) = cur {
            if let Some((cidx, clink)) = self.cache {
                if clink == link && cidx != count {
                    return Err(format!("cache index {cidx} but cached cell is at {count}"));
                }
            }
            count += 1;
            tail = Some(link);
            cur = next_of(link);
        }
        if tail != self.last {
            return Err("last handle is not the chain tail".into());
        }
        if count != self.size {
            return Err(format!("size cache {} but chain holds {count}", self.size));
        }
        if let Some((cidx, _)) = self.cache {
            if cidx >= self.size {
                return Err(format!("cache index {cidx} beyond size {}", self.size));
            }
        }
        Ok(())
    }
}

impl Sequence for SingleList {
    fn size(&self) -> usize {
        self.size
    }

    fn item(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        Ok(value_of(self.locate(idx)))
    }

    fn insert(&mut self, idx: usize, value: Element) -> Result<(), SeqError> {
        check_insert_index(idx, self.size)?;
        let cell = if idx == 0 {
            let cell = alloc_cell(SinglyLink {
                value,
                next: self.first,
            })?;
            self.first = Some(cell);
            if self.last.is_none() {
                self.last = Some(cell);
            }
            cell
        } else if idx == self.size {
            let cell = alloc_cell(SinglyLink { value, next: None })?;
            set_next(self.last.expect("non-empty list"), Some(cell));
            self.last = Some(cell);
            cell
        } else {
            let pred = self.locate(idx - 1);
            let cell = alloc_cell(SinglyLink {
                value,
                next: next_of(pred),
            })?;
            set_next(pred, Some(cell));
            cell
        };
        self.size += 1;
        self.cache = Some((idx, cell));
        Ok(())
    }

    fn remove(&mut self, idx: usize) -> Result<Element, SeqError> {
        check_index(idx, self.size)?;
        let (pred, link) = if idx == 0 {
            (None, self.first.expect("non-empty list"))
        } else {
            let pred = self.locate(idx - 1);
            (Some(pred), next_of(pred).expect("index below size"))
        };
        // SAFETY: `link` is a live cell of this list, now unlinked and freed once.
        let cell = unsafe { free_cell(link) };
        match pred {
            Some(p) => set_next(p, cell.next),
            None => self.first = cell.next,
        }
        if cell.next.is_none() {
            self.last = pred;
        }
        self.size -= 1;
        self.cache = match (cell.next, pred) {
            (Some(n), _) => Some((idx, n)),
            (None, Some(p)) => Some((idx - 1, p)),
            (None, None) => None,
        };
        Ok(cell.value)
    }

    fn footprint_bytes(&self) -> usize {
        (Self::HEADER_WORDS + SINGLY_LINK_WORDS * self.size) * WORD_BYTES
    }

    fn to_vec(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.size);
        let mut cur = self.first;
        while let Some(link) = cur {
            out.push(value_of(link));
            cur = next_of(link);
        }
        out
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }
}

impl Drop for SingleList {
    fn drop(&mut self) {
        let mut cur = self.first.take();
        while let Some(link) = cur {
            // SAFETY: each cell is visited and freed once.
            cur = unsafe { free_cell(link) }.next;
        }
    }
}
