//! Frequent-items counting in the subtract-minimum style.
//!
//! The counter deletes batches of `capacity` distinct items: whenever an
//! update leaves `capacity` items with positive counts, the smallest count is
//! subtracted from every counter and exhausted counters are dropped. Between
//! updates at most `capacity - 1` items are tracked. Each batch removes at
//! least `capacity * δ` weight, so the total deleted amount `t` satisfies
//! `t * capacity <= n` and every estimate is within `n / capacity` of the
//! true frequency from below.
//!
//! This is exactly what Frequent-Directions computes on a stream of
//! indicator rows `e_j`: the shrink amount is the smallest squared singular
//! value, which is the smallest tracked count.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{invalid, Result};

#[derive(Clone, Debug)]
pub struct MgCounter<K: Hash + Eq = u64> {
    capacity: usize,
    counts: HashMap<K, f64>,
    deleted_total: f64,
    processed: f64,
}

impl<K: Hash + Eq + Clone> MgCounter<K> {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(invalid("counter capacity must be at least 1"));
        }
        Ok(Self {
            capacity,
            counts: HashMap::with_capacity(capacity),
            deleted_total: 0.0,
            processed: 0.0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Records one appearance of `item`.
    pub fn update(&mut self, item: K) {
        self.update_weighted(item, 1.0)
            .expect("unit weight is always valid");
    }

    /// Records `weight` appearances of `item`; `weight` must be positive and finite.
    pub fn update_weighted(&mut self, item: K, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(invalid(format!("weight must be positive, got {weight}")));
        }
        *self.counts.entry(item).or_insert(0.0) += weight;
        self.processed += weight;
        if self.counts.len() >= self.capacity {
            let delta = self.counts.values().copied().fold(f64::INFINITY, f64::min);
            self.counts.retain(|_, c| {
                *c -= delta;
                *c > 0.0
            });
            self.deleted_total += delta;
        }
        Ok(())
    }

    /// Lower estimate `g_j` of the frequency of `item`; 0 for untracked items.
    pub fn estimate(&self, item: &K) -> f64 {
        self.counts.get(item).copied().unwrap_or(0.0)
    }

    /// Total amount subtracted from each counter so far (`t`).
    pub fn deleted_total(&self) -> f64 {
        self.deleted_total
    }

    /// Total weight seen (`n` for unit updates).
    pub fn processed(&self) -> f64 {
        self.processed
    }

    /// Number of items currently tracked.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(stream: &[char], capacity: usize) -> MgCounter<char> {
        let mut c = MgCounter::new(capacity).unwrap();
        for &x in stream {
            c.update(x);
        }
        c
    }

    #[test]
    fn zero_capacity_rejected() {
        assert!(MgCounter::<u64>::new(0).is_err());
    }

    #[test]
    fn below_capacity_is_exact() {
        let c = run(&['a', 'a', 'b'], 3);
        assert_eq!(c.estimate(&'a'), 2.0);
        assert_eq!(c.estimate(&'b'), 1.0);
        assert_eq!(c.deleted_total(), 0.0);
    }

    #[test]
    fn hand_simulated_deletions() {
        // a:1 | a:2 | +b -> {a:2,b:1} holds 2 items, subtract 1 -> {a:1}
        let c = run(&['a', 'a', 'b'], 2);
        assert_eq!(c.estimate(&'a'), 1.0);
        assert_eq!(c.estimate(&'b'), 0.0);
        assert_eq!(c.deleted_total(), 1.0);
        // +c -> {a:1,c:1}, subtract 1 -> {}
        let c = run(&['a', 'a', 'b', 'c'], 2);
        assert!(c.is_empty());
        assert_eq!(c.deleted_total(), 2.0);
        // f_a - g_a = 2 <= n / capacity = 2
        assert_eq!(2.0 - c.estimate(&'a'), 2.0);
    }

    #[test]
    fn repeated_single_item() {
        let c = run(&['a'; 9], 2);
        assert_eq!(c.estimate(&'a'), 9.0);
        assert_eq!(c.deleted_total(), 0.0);
    }

    #[test]
    fn absent_item_is_zero() {
        assert_eq!(run(&['a'], 4).estimate(&'z'), 0.0);
    }

    #[test]
    fn capacity_one_tracks_nothing() {
        let c = run(&['a', 'b', 'a'], 1);
        assert!(c.is_empty());
        assert_eq!(c.deleted_total(), 3.0);
    }

    #[test]
    fn weighted_updates() {
        let mut c = MgCounter::new(3).unwrap();
        c.update_weighted("x", 2.5).unwrap();
        c.update_weighted("y", 1.0).unwrap();
        c.update_weighted("z", 0.5).unwrap();
        assert_eq!(c.deleted_total(), 0.5);
        assert_eq!(c.estimate(&"x"), 2.0);
        assert!(c.update_weighted("x", -1.0).is_err());
        assert!(c.update_weighted("x", f64::NAN).is_err());
    }

    /// Every stream over {0,1,2} of length <= 7 against exact counts.
    #[test]
    fn exhaustive_small_streams() {
        for len in 0..=7u32 {
            for code in 0..3u32.pow(len) {
                let stream: Vec<u8> = (0..len).map(|p| ((code / 3u32.pow(p)) % 3) as u8).collect();
                for capacity in 1..=4 {
                    let mut c = MgCounter::new(capacity).unwrap();
                    let mut last_deleted = 0.0;
                    for &x in &stream {
                        c.update(x);
                        assert!(c.deleted_total() >= last_deleted);
                        last_deleted = c.deleted_total();
                        assert!(c.len() < capacity);
                    }
                    let n = stream.len() as f64;
                    assert!(c.deleted_total() * capacity as f64 <= n);
                    for item in 0..3u8 {
                        let f = stream.iter().filter(|&&x| x == item).count() as f64;
                        let g = c.estimate(&item);
                        assert!(f - g >= 0.0 && f - g <= c.deleted_total());
                        assert!(f - g <= n / capacity as f64);
                    }
                }
            }
        }
    }
}
