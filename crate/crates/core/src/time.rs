//! Discrete time: instants, inclusive intervals and temporal elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A discrete time point. Source timestamps (years, months, hours) are mapped
/// onto `0..horizon` at ingestion and kept in a label table for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeInstant(pub u32);

impl TimeInstant {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for TimeInstant {
    fn from(v: u32) -> Self {
        TimeInstant(v)
    }
}

impl fmt::Display for TimeInstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inclusive `[start, end]` range of instants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: TimeInstant,
    pub end: TimeInstant,
}

impl Interval {
    pub fn new(start: impl Into<TimeInstant>, end: impl Into<TimeInstant>) -> Result<Self> {
        let (start, end) = (start.into(), end.into());
        if start > end {
            return Err(Error::InvalidElement(format!(
                "interval start {start} is after end {end}"
            )));
        }
        Ok(Interval { start, end })
    }

    pub fn point(t: impl Into<TimeInstant>) -> Self {
        let t = t.into();
        Interval { start: t, end: t }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        (self.end.0 - self.start.0) as usize + 1
    }

    pub fn contains(&self, t: TimeInstant) -> bool {
        self.start <= t && t <= self.end
    }
}

/// A set of instants stored as sorted, disjoint, non-adjacent intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TemporalElement {
    intervals: Vec<Interval>,
}

impl TemporalElement {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut intervals: Vec<Interval> = intervals.into_iter().collect();
        intervals.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match out.last_mut() {
                Some(last) if iv.start.0 <= last.end.0.saturating_add(1) => {
                    if iv.end > last.end {
                        last.end = iv.end;
                    }
                }
                _ => out.push(iv),
            }
        }
        TemporalElement { intervals: out }
    }

    pub fn from_instants(instants: impl IntoIterator<Item = TimeInstant>) -> Self {
        Self::from_intervals(instants.into_iter().map(Interval::point))
    }

    pub fn interval(start: impl Into<TimeInstant>, end: impl Into<TimeInstant>) -> Result<Self> {
        Ok(TemporalElement {
            intervals: vec![Interval::new(start, end)?],
        })
    }

    /// The horizon `[0, n - 1]`; empty for `n == 0`.
    pub fn horizon(n: usize) -> Self {
        if n == 0 {
            return Self::empty();
        }
        TemporalElement {
            intervals: vec![Interval {
                start: TimeInstant(0),
                end: TimeInstant(n as u32 - 1),
            }],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of instants covered.
    pub fn len(&self) -> usize {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn first(&self) -> Option<TimeInstant> {
        self.intervals.first().map(|iv| iv.start)
    }

    pub fn last(&self) -> Option<TimeInstant> {
        self.intervals.last().map(|iv| iv.end)
    }

    pub fn is_contiguous(&self) -> bool {
        self.intervals.len() == 1
    }

    pub fn contains(&self, t: TimeInstant) -> bool {
        self.position(t).is_ok()
    }

    // Ok(i) when intervals[i] contains t, Err(i) with the insertion point otherwise.
    fn position(&self, t: TimeInstant) -> std::result::Result<usize, usize> {
        self.intervals.binary_search_by(|iv| {
            if iv.end < t {
                std::cmp::Ordering::Less
            } else if iv.start > t {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    }

    pub fn instants(&self) -> impl Iterator<Item = TimeInstant> + '_ {
        self.intervals
            .iter()
            .flat_map(|iv| (iv.start.0..=iv.end.0).map(TimeInstant))
    }

    pub fn is_subset(&self, other: &TemporalElement) -> bool {
        self.intervals
            .iter()
            .all(|iv| matches!(other.position(iv.start), Ok(i) if other.intervals[i].end >= iv.end))
    }

    pub fn covers(&self, iv: Interval) -> bool {
        matches!(self.position(iv.start), Ok(i) if self.intervals[i].end >= iv.end)
    }

    pub fn overlaps(&self, iv: Interval) -> bool {
        match self.position(iv.start) {
            Ok(_) => true,
            Err(i) => self
                .intervals
                .get(i)
                .is_some_and(|next| next.start <= iv.end),
        }
    }

    pub fn intersects(&self, other: &TemporalElement) -> bool {
        other.intervals.iter().any(|iv| self.overlaps(*iv))
    }

    pub fn union(&self, other: &TemporalElement) -> TemporalElement {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn intersection(&self, other: &TemporalElement) -> TemporalElement {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (self.intervals[i], other.intervals[j]);
            let start = a.start.max(b.start);
            let end = a.end.min(b.end);
            if start <= end {
                out.push(Interval { start, end });
            }
            if a.end < b.end {
                i += 1;
            } else {
                j += 1;
            }
        }
        TemporalElement { intervals: out }
    }

    /// Instants of `self` strictly before `t`, truncated.
    pub fn truncate_before(&self, t: TimeInstant) -> TemporalElement {
        let mut out = Vec::new();
        for iv in &self.intervals {
            if iv.start >= t {
                break;
            }
            out.push(Interval {
                start: iv.start,
                end: iv.end.min(TimeInstant(t.0 - 1)),
            });
        }
        TemporalElement { intervals: out }
    }

    /// Number of consecutive instants contained in `self` ending at `t`
    /// (0 when `t` is absent).
    pub fn run_ending_at(&self, t: TimeInstant) -> usize {
        match self.position(t) {
            Ok(i) => (t.0 - self.intervals[i].start.0) as usize + 1,
            Err(_) => 0,
        }
    }

    /// Latest contained instant `<= t`.
    pub fn latest_at_or_before(&self, t: TimeInstant) -> Option<TimeInstant> {
        match self.position(t) {
            Ok(_) => Some(t),
            Err(0) => None,
            Err(i) => Some(self.intervals[i - 1].end),
        }
    }
}

impl fmt::Display for TemporalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if iv.start == iv.end {
                write!(f, "[{}]", iv.start)?;
            } else {
                write!(f, "[{}, {}]", iv.start, iv.end)?;
            }
        }
        f.write_str("}")
    }
}

/// A contiguous window `[reference - len, reference - 1]` immediately
/// preceding a reference point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: TimeInstant,
    pub end: TimeInstant,
}

impl Window {
    /// The window of `len` instants ending right before `reference`.
    pub fn preceding(reference: TimeInstant, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidElement("empty preceding window".into()));
        }
        if len > reference.index() {
            return Err(Error::InvalidWindow(format!(
                "a window of length {len} does not fit before instant {reference}"
            )));
        }
        Ok(Window {
            start: TimeInstant(reference.0 - len as u32),
            end: TimeInstant(reference.0 - 1),
        })
    }

    /// Checks that `te` is a nonempty contiguous element ending at `reference - 1`.
    pub fn from_element(reference: TimeInstant, te: &TemporalElement) -> Result<Self> {
        if te.is_empty() {
            return Err(Error::InvalidElement("empty temporal element".into()));
        }
        if !te.is_contiguous() || te.last().map(|t| t.0 + 1) != Some(reference.0) {
            return Err(Error::InvalidWindow(format!(
                "{te} does not immediately precede instant {reference}"
            )));
        }
        Ok(Window {
            start: te.intervals[0].start,
            end: te.intervals[0].end,
        })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        (self.end.0 - self.start.0) as usize + 1
    }

    pub fn interval(&self) -> Interval {
        Interval {
            start: self.start,
            end: self.end,
        }
    }

    pub fn to_element(self) -> TemporalElement {
        TemporalElement::from_intervals([self.interval()])
    }
}
