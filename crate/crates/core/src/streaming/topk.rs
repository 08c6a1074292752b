use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use ordered_float::OrderedFloat;

use super::{CountSketch, TurnstileUpdate};
use crate::error::{JlError, Result};

/// Approximate top-`k` items of an insertion-only stream, backed by a
/// [`CountSketch`].
///
/// Entries are ordered by estimate; on equal estimates the larger index is
/// evicted first.
#[derive(Debug, Clone)]
pub struct HeavyHitterHeap {
    k: usize,
    sketch: CountSketch,
    order: BTreeSet<(OrderedFloat<f64>, Reverse<u64>)>,
    estimates: HashMap<u64, f64>,
}

impl HeavyHitterHeap {
    pub fn new(k: usize, sketch: CountSketch) -> Result<Self> {
        if k == 0 {
            return Err(JlError::param("heap capacity must be >= 1"));
        }
        Ok(Self { k, sketch, order: BTreeSet::new(), estimates: HashMap::new() })
    }

    pub fn capacity(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn sketch(&self) -> &CountSketch {
        &self.sketch
    }

    pub fn contains(&self, index: u64) -> bool {
        self.estimates.contains_key(&index)
    }

    pub fn update(&mut self, u: TurnstileUpdate) -> Result<()> {
        if u.value <= 0 {
            return Err(JlError::domain(format!(
                "insertion-only stream got value {} for index {}",
                u.value, u.index
            )));
        }
        let est = self.sketch.update_and_query(u)?;
        if let Some(old) = self.estimates.insert(u.index, est) {
            self.order.remove(&(OrderedFloat(old), Reverse(u.index)));
        }
        self.order.insert((OrderedFloat(est), Reverse(u.index)));
        if self.order.len() > self.k {
            if let Some((_, Reverse(evicted))) = self.order.pop_first() {
                self.estimates.remove(&evicted);
            }
        }
        Ok(())
    }

    /// `(index, estimate)` by descending estimate, ties by ascending index.
    pub fn items(&self) -> Vec<(u64, f64)> {
        self.order.iter().rev().map(|&(OrderedFloat(e), Reverse(i))| (i, e)).collect()
    }
}

/// One pass over an insertion-only stream.
pub fn topk_process<I>(
    stream: I,
    k: usize,
    eps: f64,
    delta: f64,
    d: u64,
    seed: u64,
) -> Result<HeavyHitterHeap>
where
    I: IntoIterator<Item = TurnstileUpdate>,
{
    let mut heap = HeavyHitterHeap::new(k, CountSketch::new(d, eps, delta, seed)?)?;
    for u in stream {
        heap.update(u)?;
    }
    Ok(heap)
}
