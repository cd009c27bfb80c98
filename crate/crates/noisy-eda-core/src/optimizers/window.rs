use alloc::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::ScoredSample;

/// FIFO history of at most `capacity` scored samples, oldest first.
///
/// Entries keep the fitness they were observed with; nothing in the window
/// is ever re-evaluated.
#[derive(Debug, Clone)]
pub struct SlidingWindow {
    capacity: usize,
    entries: VecDeque<ScoredSample>,
}

impl SlidingWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParameter {
                name: "w",
                reason: "window width must be at least 1",
            });
        }
        Ok(Self {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.capacity
    }

    /// Entries in arrival order, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &ScoredSample> {
        self.entries.iter()
    }

    /// Appends `sample`, evicting and returning the oldest entry if and
    /// only if the window was already full.
    pub fn push(&mut self, sample: ScoredSample) -> Option<ScoredSample> {
        let evicted = if self.is_full() {
            self.entries.pop_front()
        } else {
            None
        };
        self.entries.push_back(sample);
        evicted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    use crate::model::BitString;

    fn sample(tag: f64) -> ScoredSample {
        ScoredSample::new(BitString::zeros(2), tag)
    }

    #[test]
    fn rejects_zero_capacity() {
        assert!(matches!(
            SlidingWindow::new(0),
            Err(Error::InvalidParameter { name: "w", .. })
        ));
    }

    #[test]
    fn fills_before_evicting() {
        let mut w = SlidingWindow::new(3).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.push(sample(1.0)), None);
        assert_eq!(w.push(sample(2.0)), None);
        assert!(!w.is_full());
        assert_eq!(w.push(sample(3.0)), None);
        assert!(w.is_full());

        let evicted = w.push(sample(4.0)).expect("full window must evict");
        assert_eq!(evicted.fitness(), 1.0);
        assert_eq!(w.len(), 3);

        let order: Vec<f64> = w.iter().map(ScoredSample::fitness).collect();
        assert_eq!(order, [2.0, 3.0, 4.0]);
    }

    #[test]
    fn width_one_window_replaces_its_entry() {
        let mut w = SlidingWindow::new(1).unwrap();
        assert_eq!(w.push(sample(1.0)), None);
        assert_eq!(w.push(sample(2.0)).unwrap().fitness(), 1.0);
        assert_eq!(w.iter().next().unwrap().fitness(), 2.0);
    }
}
