//! Trajectory containers shared by the jump, diffusive, and discrete
//! simulators.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One detector click. Detector indices are 0-based throughout the crate
/// and its file formats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEvent<T: Scalar> {
    pub time: T,
    pub detector: usize,
}

/// Ordered click list; one sample point of the trajectory law, truncated
/// to the simulation horizon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionRecord<T: Scalar> {
    events: Vec<DetectionEvent<T>>,
}

impl<T: Scalar> DetectionRecord<T> {
    pub fn new(events: Vec<DetectionEvent<T>>) -> Result<Self> {
        for (i, pair) in events.windows(2).enumerate() {
            if pair[1].time < pair[0].time {
                return Err(Error::RecordOutOfOrder { index: i + 1 });
            }
        }
        if events.iter().any(|e| !e.time.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DetectionRecord { events })
    }

    pub fn empty() -> Self {
        DetectionRecord { events: Vec::new() }
    }

    pub(crate) fn push(&mut self, event: DetectionEvent<T>) {
        debug_assert!(self
            .events
            .last()
            .map(|last| last.time <= event.time)
            .unwrap_or(true));
        self.events.push(event);
    }

    pub fn events(&self) -> &[DetectionEvent<T>] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Clicks of detector `i` up to and including time `t`.
    pub fn count_up_to(&self, detector: usize, t: T) -> u64 {
        self.events
            .iter()
            .filter(|e| e.detector == detector && e.time <= t)
            .count() as u64
    }
}

/// One simulated trajectory: states on a strictly increasing time grid
/// (uniform output times plus click times), together with the detection
/// record that produced it.
#[derive(Debug, Clone)]
pub struct SampledPath<T: Scalar> {
    times: Vec<T>,
    states: Vec<Density<T>>,
    record: DetectionRecord<T>,
}

impl<T: Scalar> SampledPath<T> {
    pub fn new(times: Vec<T>, states: Vec<Density<T>>, record: DetectionRecord<T>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch {
                left: times.len(),
                right: states.len(),
            });
        }
        if times.is_empty() || times[0] != T::zero() {
            return Err(Error::Config("path must start at t = 0".into()));
        }
        for pair in times.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Config("path times must strictly increase".into()));
            }
        }
        Ok(SampledPath {
            times,
            states,
            record,
        })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[Density<T>] {
        &self.states
    }

    pub fn record(&self) -> &DetectionRecord<T> {
        &self.record
    }

    pub fn horizon(&self) -> T {
        *self.times.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &Density<T> {
        self.states.last().expect("paths are nonempty")
    }

    /// Index of the last grid node with time `<= t`.
    pub fn node_at_or_before(&self, t: T) -> Result<usize> {
        if t < T::zero() || t > self.horizon() {
            return Err(Error::HorizonExceeded {
                t: t.to_f64_lossy(),
                horizon: self.horizon().to_f64_lossy(),
            });
        }
        let mut idx = 0;
        for (i, &ti) in self.times.iter().enumerate() {
            if ti <= t {
                idx = i;
            } else {
                break;
            }
        }
        Ok(idx)
    }

    /// State at the grid node closest to `t` among nodes at or before it.
    pub fn state_at_or_before(&self, t: T) -> Result<&Density<T>> {
        Ok(&self.states[self.node_at_or_before(t)?])
    }
}
