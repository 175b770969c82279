//! Circular index arithmetic over power-of-two storage areas.
//!
//! A ring is a slice whose length is a power of two, plus a `lower` slot
//! holding logical position 0. Logical position `u` lives in physical slot
//! `(lower + u) & (len - 1)`.

/// Physical slot of logical position `u` in a ring of `capacity` slots.
#[inline]
pub fn mask_index(lower: usize, u: usize, capacity: usize) -> usize {
    debug_assert!(capacity.is_power_of_two());
    (lower + u) & (capacity - 1)
}

/// `lower` moved `delta` slots to the left, wrapping.
#[inline]
pub fn wrap_back(lower: usize, delta: usize, capacity: usize) -> usize {
    debug_assert!(capacity.is_power_of_two());
    lower.wrapping_sub(delta) & (capacity - 1)
}

/// Shifts logical positions `[from, from + len)` one slot to the right.
///
/// The slot at logical `from + len` is overwritten.
pub fn shift_right<T: Copy>(buf: &mut [T], lower: usize, from: usize, len: usize) {
    let cap = buf.len();
    debug_assert!(cap.is_power_of_two() && len < cap);
    let mask = cap - 1;
    let mut remaining = len;
    while remaining > 0 {
        let src_end = (lower + from + remaining - 1) & mask;
        let dst_end = (src_end + 1) & mask;
        let k = if dst_end == 0 {
            1
        } else {
            remaining.min(src_end + 1)
        };
        if dst_end == 0 {
            buf[0] = buf[mask];
        } else {
            buf.copy_within(src_end + 1 - k..=src_end, dst_end + 1 - k);
        }
        remaining -= k;
    }
}

/// Shifts logical positions `[from, from + len)` one slot to the left.
///
/// The slot at logical `from - 1` (wrapping) is overwritten.
pub fn shift_left<T: Copy>(buf: &mut [T], lower: usize, from: usize, len: usize) {
    let cap = buf.len();
    debug_assert!(cap.is_power_of_two() && len < cap);
    let mask = cap - 1;
    let mut done = 0;
    while done < len {
        let src = (lower + from + done) & mask;
        let k = if src == 0 {
            buf[mask] = buf[0];
            1
        } else {
            let k = (len - done).min(cap - src);
            buf.copy_within(src..src + k, src - 1);
            k
        };
        done += k;
    }
}

/// Copies `len` logical elements of one ring into another ring.
pub fn copy_between<T: Copy>(
    src: &[T],
    src_lower: usize,
    src_from: usize,
    dst: &mut [T],
    dst_lower: usize,
    dst_from: usize,
    len: usize,
) {
    let (smask, dmask) = (src.len() - 1, dst.len() - 1);
    let mut done = 0;
    while done < len {
        let s = (src_lower + src_from + done) & smask;
        let d = (dst_lower + dst_from + done) & dmask;
        let k = (len - done).min(src.len() - s).min(dst.len() - d);
        dst[d..d + k].copy_from_slice(&src[s..s + k]);
        done += k;
    }
}

/// Appends the logical contents `[0, len)` of a ring to `out`.
pub fn extend_from_ring<T: Copy>(out: &mut Vec<T>, buf: &[T], lower: usize, len: usize) {
    if len == 0 {
        return;
    }
    let head = len.min(buf.len() - lower);
    out.extend_from_slice(&buf[lower..lower + head]);
    out.extend_from_slice(&buf[..len - head]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn logical(buf: &[i64], lower: usize, len: usize) -> Vec<i64> {
        (0..len)
            .map(|u| buf[mask_index(lower, u, buf.len())])
            .collect()
    }

    #[test]
    fn mask_index_examples() {
        assert_eq!(mask_index(0, 3, 8), 3);
        assert_eq!(mask_index(5, 4, 8), 1);
        assert_eq!(mask_index(7, 0, 8), 7);
        assert_eq!(wrap_back(0, 1, 8), 7);
    }

    #[test]
    fn extend_wraps() {
        let buf = [4, 5, 0, 0, 0, 1, 2, 3];
        let mut out = Vec::new();
        extend_from_ring(&mut out, &buf, 5, 5);
        assert_eq!(out, vec![1, 2, 3, 4, 5]);
    }

    proptest! {
        #[test]
        fn shift_right_matches_model(
            log_cap in 1u32..6, lower in 0usize..32, from in 0usize..32, len in 0usize..32,
        ) {
            let cap = 1usize << log_cap;
            let lower = lower % cap;
            let from = from % cap;
            let len = len % (cap - from).max(1);
            prop_assume!(from + len < cap);
            let mut buf: Vec<i64> = (0..cap as i64).map(|x| 100 + x).collect();
            let before = logical(&buf, lower, cap);
            shift_right(&mut buf, lower, from, len);
            let after = logical(&buf, lower, cap);
            let mut expect = before.clone();
            for u in (from..from + len).rev() {
                expect[u + 1] = before[u];
            }
            prop_assert_eq!(after, expect);
        }

        #[test]
        fn shift_left_matches_model(
            log_cap in 1u32..6, lower in 0usize..32, from in 1usize..32, len in 0usize..32,
        ) {
            let cap = 1usize << log_cap;
            let lower = lower % cap;
            let from = from % cap;
            prop_assume!(from >= 1);
            let len = len % (cap - from + 1);
            let mut buf: Vec<i64> = (0..cap as i64).map(|x| 100 + x).collect();
            let before = logical(&buf, lower, cap);
            shift_left(&mut buf, lower, from, len);
            let after = logical(&buf, lower, cap);
            let mut expect = before.clone();
            expect[from - 1..from + len - 1].copy_from_slice(&before[from..from + len]);
            prop_assert_eq!(after, expect);
        }

        #[test]
        fn copy_between_matches_model(
            sl in 0usize..8, dl in 0usize..16, sf in 0usize..8, df in 0usize..16, len in 0usize..8,
        ) {
            let src: Vec<i64> = (0..8).collect();
            let mut dst = vec![-1i64; 16];
            let len = len.min(8 - sf);
            copy_between(&src, sl, sf, &mut dst, dl, df, len);
            for j in 0..len {
                prop_assert_eq!(dst[mask_index(dl, df + j, 16)], src[mask_index(sl, sf + j, 8)]);
            }
        }
    }
}
