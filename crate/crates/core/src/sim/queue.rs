use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{SimError, SimTime};

/// What a scheduled event represents. Payload data is owned by the module
/// driving the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    BlockFound,
    WeakFound,
    DeliverBlock,
    DeliverHeader,
    MempoolRefill,
    Snapshot,
}

#[derive(Debug, Clone)]
pub struct SimEvent<T> {
    pub time: SimTime,
    pub kind: EventKind,
    pub payload: T,
    pub seq: u64,
}

struct Entry<T>(SimEvent<T>);

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Entry<T> {}

impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Entry<T> {
    // Reversed so the max-heap pops the earliest (time, seq).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .time
            .total_cmp(&self.0.time)
            .then_with(|| other.0.seq.cmp(&self.0.seq))
    }
}

/// Future-event list ordered by `(time, seq)`.
///
/// `seq` is assigned at insertion, so events scheduled for the same instant
/// come out in FIFO order.
pub struct EventQueue<T> {
    heap: BinaryHeap<Entry<T>>,
    now: SimTime,
    next_seq: u64,
}

impl<T> Default for EventQueue<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> EventQueue<T> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            now: 0.0,
            next_seq: 0,
        }
    }

    /// Current simulation time: the time of the last popped event.
    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn schedule(&mut self, time: SimTime, kind: EventKind, payload: T) -> Result<u64, SimError> {
        if !time.is_finite() || time < self.now {
            return Err(SimError::EventInPast {
                time,
                now: self.now,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Entry(SimEvent {
            time,
            kind,
            payload,
            seq,
        }));
        Ok(seq)
    }

    pub fn pop(&mut self) -> Option<SimEvent<T>> {
        let Entry(ev) = self.heap.pop()?;
        debug_assert!(ev.time >= self.now);
        self.now = ev.time;
        Some(ev)
    }

    pub fn peek_time(&self) -> Option<SimTime> {
        self.heap.peek().map(|e| e.0.time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_event_round_trip() {
        let mut q = EventQueue::new();
        q.schedule(5.0, EventKind::BlockFound, 'a').unwrap();
        let ev = q.pop().unwrap();
        assert_eq!(ev.time, 5.0);
        assert_eq!(ev.payload, 'a');
        assert_eq!(q.now(), 5.0);
        assert!(q.pop().is_none());
    }

    #[test]
    fn equal_times_pop_fifo() {
        let mut q = EventQueue::new();
        let s1 = q.schedule(3.0, EventKind::DeliverBlock, 1).unwrap();
        let s2 = q.schedule(3.0, EventKind::DeliverBlock, 2).unwrap();
        assert!(s1 < s2);
        assert_eq!(q.pop().unwrap().payload, 1);
        assert_eq!(q.pop().unwrap().payload, 2);
    }

    #[test]
    fn rejects_past_events() {
        let mut q = EventQueue::new();
        q.schedule(4.0, EventKind::Snapshot, ()).unwrap();
        q.pop();
        let err = q.schedule(2.0, EventKind::Snapshot, ()).unwrap_err();
        assert!(matches!(err, SimError::EventInPast { .. }));
        assert!(q.schedule(f64::NAN, EventKind::Snapshot, ()).is_err());
        // scheduling exactly at `now` is fine
        q.schedule(4.0, EventKind::Snapshot, ()).unwrap();
    }

    #[test]
    fn interleaved_times_sorted() {
        let mut q = EventQueue::new();
        for (i, t) in [7.0, 1.0, 3.0, 1.0, 9.0, 0.5].into_iter().enumerate() {
            q.schedule(t, EventKind::Snapshot, i).unwrap();
        }
        let order: Vec<usize> = std::iter::from_fn(|| q.pop().map(|e| e.payload)).collect();
        assert_eq!(order, vec![5, 1, 3, 2, 0, 4]);
    }
}
