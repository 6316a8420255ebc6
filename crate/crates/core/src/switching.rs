//! Piecewise-constant, right-continuous topology schedules and their
//! admissibility (weight balance at all times, positive dwell time, and
//! recurring joint strong connectivity).

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;

/// Slack used when comparing times against segment boundaries.
const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Repeat {
    None,
    Cyclic(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSchedule {
    graphs: Vec<WeightedDigraph>,
    segments: Vec<(f64, usize)>,
    repeat: Repeat,
    end: Option<f64>,
    dwell_min: f64,
}

impl SwitchingSchedule {
    /// `segments` are `(start_time, graph_index)` pairs starting at 0 with
    /// strictly increasing times. For `Repeat::None` the last segment lasts
    /// until `end`, or forever when `end` is `None`.
    pub fn new(
        graphs: Vec<WeightedDigraph>,
        segments: Vec<(f64, usize)>,
        repeat: Repeat,
        end: Option<f64>,
    ) -> Result<Self> {
        let n = graphs.first().ok_or_else(|| Error::param("graphs", "schedule needs at least one graph"))?.n();
        if let Some(g) = graphs.iter().find(|g| g.n() != n) {
            return Err(Error::NodeCountMismatch {
                expected: n,
                found: g.n(),
            });
        }
        match segments.first() {
            None => return Err(Error::param("segments", "schedule needs at least one segment")),
            Some(&(t0, _)) if t0 != 0.0 => {
                return Err(Error::param("segments", format!("first segment must start at 0, got {t0}")))
            }
            _ => {}
        }
        if segments.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::param("segments", "start times must be strictly increasing"));
        }
        if let Some(&(_, idx)) = segments.iter().find(|s| s.1 >= graphs.len()) {
            return Err(Error::param("segments", format!("graph index {idx} out of range")));
        }
        let last = segments.last().unwrap().0;
        let tail_end = match (repeat, end) {
            (Repeat::Cyclic(period), _) => {
                if !(period > last) {
                    return Err(Error::param("repeat", format!("cyclic period {period} must exceed last start {last}")));
                }
                Some(period)
            }
            (Repeat::None, Some(e)) => {
                if !(e > last) {
                    return Err(Error::param("end", format!("end {e} must exceed last start {last}")));
                }
                Some(e)
            }
            (Repeat::None, None) => None,
        };
        let mut dwell_min = segments.windows(2).map(|w| w[1].0 - w[0].0).fold(f64::INFINITY, f64::min);
        if let Some(e) = tail_end {
            dwell_min = dwell_min.min(e - last);
        }
        Ok(SwitchingSchedule {
            graphs,
            segments,
            repeat,
            end,
            dwell_min,
        })
    }

    /// A schedule that never switches.
    pub fn constant(g: WeightedDigraph) -> Self {
        SwitchingSchedule::new(vec![g], vec![(0.0, 0)], Repeat::None, None).expect("single segment is valid")
    }

    /// Cycles through `graphs` in order, each active for `dwell` seconds.
    pub fn round_robin(graphs: Vec<WeightedDigraph>, dwell: f64) -> Result<Self> {
        let k = graphs.len();
        let segments = (0..k).map(|i| (i as f64 * dwell, i)).collect();
        SwitchingSchedule::new(graphs, segments, Repeat::Cyclic(k as f64 * dwell), None)
    }

    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    pub fn graphs(&self) -> &[WeightedDigraph] {
        &self.graphs
    }

    pub fn segments(&self) -> &[(f64, usize)] {
        &self.segments
    }

    pub fn repeat(&self) -> Repeat {
        self.repeat
    }

    pub fn end(&self) -> Option<f64> {
        self.end
    }

    /// Shortest interval between consecutive switches (infinite if the schedule never switches).
    pub fn dwell_min(&self) -> f64 {
        self.dwell_min
    }

    /// Index of the active graph; at a switching instant the new graph applies.
    pub fn graph_at(&self, t: f64) -> Result<usize> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        let local = match (self.repeat, self.end) {
            (Repeat::Cyclic(period), _) => {
                let wraps = ((t + TIME_EPS) / period).floor();
                (t - wraps * period).max(0.0)
            }
            (Repeat::None, Some(end)) if t >= end - TIME_EPS => {
                return Err(Error::BeyondSchedule { t, end });
            }
            _ => t,
        };
        let pos = self.segments.partition_point(|&(start, _)| start <= local + TIME_EPS);
        Ok(self.segments[pos - 1].1)
    }

    pub fn graph(&self, index: usize) -> &WeightedDigraph {
        &self.graphs[index]
    }

    /// Switching instants in `(0, horizon)` in increasing order.
    pub fn switch_times(&self, horizon: f64) -> Vec<f64> {
        self.segment_spans(horizon)
            .into_iter()
            .skip(1)
            .map(|(start, _, _)| start)
            .collect()
    }

    /// `(start, end, graph index)` for every active segment intersecting `[0, horizon)`.
    pub fn segment_spans(&self, horizon: f64) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        let mut offset = 0.0;
        loop {
            for (k, &(start, idx)) in self.segments.iter().enumerate() {
                let t0 = offset + start;
                if t0 >= horizon - TIME_EPS {
                    return out;
                }
                let t1 = match self.segments.get(k + 1) {
                    Some(&(next, _)) => offset + next,
                    None => match (self.repeat, self.end) {
                        (Repeat::Cyclic(period), _) => offset + period,
                        (Repeat::None, Some(end)) => end,
                        (Repeat::None, None) => f64::INFINITY,
                    },
                };
                // merge consecutive spans of the same graph across a wrap
                match out.last_mut() {
                    Some((_, end, last_idx)) if *last_idx == idx && (*end - t0).abs() < TIME_EPS => {
                        *end = t1.min(horizon)
                    }
                    _ => out.push((t0, t1.min(horizon), idx)),
                }
            }
            match self.repeat {
                Repeat::Cyclic(period) => offset += period,
                Repeat::None => return out,
            }
        }
    }
}

/// Union of edge sets; an edge present in several inputs keeps its largest weight.
pub fn union_digraph(gs: &[&WeightedDigraph]) -> Result<WeightedDigraph> {
    let first = gs.first().ok_or_else(|| Error::param("graphs", "union of zero digraphs"))?;
    let n = first.n();
    let mut acc = first.adjacency().clone();
    for g in &gs[1..] {
        if g.n() != n {
            return Err(Error::NodeCountMismatch {
                expected: n,
                found: g.n(),
            });
        }
        acc.zip_apply(g.adjacency(), |a, b| *a = a.max(b));
    }
    WeightedDigraph::from_adjacency(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    /// One full period is jointly strongly connected, so the pattern recurs forever.
    Periodic,
    /// The schedule settles on a single strongly connected graph.
    ConstantTail,
    /// A finite schedule; recurrence can only be observed up to its end.
    FiniteHorizonOnly,
    Fails,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub all_balanced: bool,
    pub dwell_ok: bool,
    /// Greedy partition of `[0, horizon)` into windows with strongly connected unions.
    pub joint_connectivity_intervals: Vec<(f64, f64)>,
    pub recurrence: Recurrence,
    pub recurrent: bool,
    pub admissible: bool,
    pub notes: Vec<String>,
}

/// Checks balance of every referenced graph, the dwell time, and joint
/// strong connectivity on `[0, horizon)`.
pub fn validate_admissible(sched: &SwitchingSchedule, horizon: f64, tol: f64) -> Result<AdmissibilityReport> {
    if !(horizon > 0.0) {
        return Err(Error::param("horizon", format!("must be > 0, got {horizon}")));
    }
    let mut notes = Vec::new();
    let used: Vec<usize> = {
        let mut v: Vec<usize> = sched.segments.iter().map(|s| s.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut all_balanced = true;
    for &i in &used {
        if !sched.graphs[i].is_weight_balanced(tol) {
            all_balanced = false;
            notes.push(format!("graph {i} is not weight-balanced"));
        }
    }
    let dwell_ok = sched.dwell_min > 0.0;

    let spans = sched.segment_spans(horizon);
    let mut intervals = Vec::new();
    let mut window: Option<(f64, WeightedDigraph)> = None;
    for &(t0, t1, idx) in &spans {
        let g = &sched.graphs[idx];
        let (start, joint) = match window.take() {
            None => (t0, g.clone()),
            Some((start, acc)) => (start, union_digraph(&[&acc, g])?),
        };
        if joint.is_strongly_connected() {
            if t1.is_infinite() || t1 >= horizon {
                intervals.push((start, horizon));
            } else {
                intervals.push((start, t1));
            }
        } else {
            window = Some((start, joint));
        }
    }

    let recurrence = match (sched.repeat, sched.end) {
        (Repeat::Cyclic(_), _) => {
            let members: Vec<&WeightedDigraph> = used.iter().map(|&i| &sched.graphs[i]).collect();
            if union_digraph(&members)?.is_strongly_connected() {
                Recurrence::Periodic
            } else {
                Recurrence::Fails
            }
        }
        (Repeat::None, None) => {
            let last = &sched.graphs[sched.segments.last().unwrap().1];
            if last.is_strongly_connected() {
                if sched.segments.len() > 1 {
                    notes.push("switching stops: strongly connected constant tail accepted as recurrent".into());
                }
                Recurrence::ConstantTail
            } else {
                Recurrence::Fails
            }
        }
        (Repeat::None, Some(_)) => {
            notes.push("finite schedule: recurrence checked on the horizon only".into());
            if intervals.is_empty() {
                Recurrence::Fails
            } else {
                Recurrence::FiniteHorizonOnly
            }
        }
    };
    let recurrent = recurrence != Recurrence::Fails;
    Ok(AdmissibilityReport {
        all_balanced,
        dwell_ok,
        joint_connectivity_intervals: intervals,
        recurrence,
        recurrent,
        admissible: all_balanced && dwell_ok && recurrent,
        notes,
    })
}

/// Cycle through `fig1b`..`fig1e`, two seconds each.
pub fn case1_schedule() -> SwitchingSchedule {
    let graphs = ["fig1b", "fig1c", "fig1d", "fig1e"]
        .iter()
        .map(|n| crate::graph::preset(n).unwrap())
        .collect();
    SwitchingSchedule::round_robin(graphs, 2.0).unwrap()
}

/// `fig1a`..`fig1e`, two seconds each, then `fig1a` from `t = 10` on.
pub fn case2_schedule() -> SwitchingSchedule {
    let graphs = crate::graph::PRESET_NAMES
        .iter()
        .map(|n| crate::graph::preset(n).unwrap())
        .collect();
    let segments = vec![(0.0, 0), (2.0, 1), (4.0, 2), (6.0, 3), (8.0, 4), (10.0, 0)];
    SwitchingSchedule::new(graphs, segments, Repeat::None, None).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preset, Edge};

    fn three_segment() -> SwitchingSchedule {
        let gs = ["fig1b", "fig1c", "fig1d"].iter().map(|n| preset(n).unwrap()).collect();
        SwitchingSchedule::new(gs, vec![(0.0, 0), (2.0, 1), (4.0, 2)], Repeat::None, Some(6.0)).unwrap()
    }

    #[test]
    fn graph_at_intervals() {
        let s = three_segment();
        assert_eq!(s.graph_at(3.0).unwrap(), 1);
        assert_eq!(s.graph_at(2.0).unwrap(), 1);
        assert_eq!(s.graph_at(1.999).unwrap(), 0);
        assert!(matches!(s.graph_at(6.0), Err(Error::BeyondSchedule { .. })));
        assert!(matches!(s.graph_at(-1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn graph_at_cyclic_wraps() {
        let s = case1_schedule();
        assert_eq!(s.graph_at(11.0).unwrap(), s.graph_at(3.0).unwrap());
        assert_eq!(s.graph_at(8.0).unwrap(), 0);
        assert_eq!(s.graph_at(7.999).unwrap(), 3);
    }

    #[test]
    fn constructor_rejects_bad_segments() {
        let g = || vec![preset("fig1a").unwrap()];
        assert!(SwitchingSchedule::new(g(), vec![(1.0, 0)], Repeat::None, None).is_err());
        assert!(SwitchingSchedule::new(g(), vec![(0.0, 0), (0.0, 0)], Repeat::None, None).is_err());
        assert!(SwitchingSchedule::new(g(), vec![(0.0, 1)], Repeat::None, None).is_err());
        assert!(SwitchingSchedule::new(g(), vec![(0.0, 0), (2.0, 0)], Repeat::Cyclic(2.0), None).is_err());
        let mixed = vec![preset("fig1a").unwrap(), WeightedDigraph::empty(3).unwrap()];
        assert!(matches!(
            SwitchingSchedule::new(mixed, vec![(0.0, 0)], Repeat::None, None),
            Err(Error::NodeCountMismatch { .. })
        ));
    }

    #[test]
    fn union_examples() {
        let b = preset("fig1b").unwrap();
        let c = preset("fig1c").unwrap();
        let bc = union_digraph(&[&b, &c]).unwrap();
        assert_eq!(bc.edge_count(), 8);
        assert!(bc.is_strongly_connected());
        assert_eq!(union_digraph(&[&b, &b]).unwrap(), b);
        assert_eq!(union_digraph(&[&b, &WeightedDigraph::empty(6).unwrap()]).unwrap(), b);
        assert!(union_digraph(&[&b, &WeightedDigraph::empty(3).unwrap()]).is_err());
    }

    #[test]
    fn union_keeps_max_weight() {
        let a = WeightedDigraph::from_edges(2, &[Edge(1, 2, 1.0)]).unwrap();
        let b = WeightedDigraph::from_edges(2, &[Edge(1, 2, 3.0), Edge(2, 1, 0.5)]).unwrap();
        let u = union_digraph(&[&a, &b]).unwrap();
        assert_eq!(u.weight(0, 1), 3.0);
        assert_eq!(u.weight(1, 0), 0.5);
    }

    #[test]
    fn case1_admissible() {
        let r = validate_admissible(&case1_schedule(), 40.0, 1e-10).unwrap();
        assert!(r.admissible, "{r:?}");
        assert_eq!(r.recurrence, Recurrence::Periodic);
        // b∪c and d∪e are each strongly connected
        assert_eq!(r.joint_connectivity_intervals[0], (0.0, 4.0));
        assert_eq!(r.joint_connectivity_intervals[1], (4.0, 8.0));
        assert_eq!(r.joint_connectivity_intervals.len(), 10);
    }

    #[test]
    fn case2_constant_tail() {
        let r = validate_admissible(&case2_schedule(), 40.0, 1e-10).unwrap();
        assert!(r.admissible);
        assert_eq!(r.recurrence, Recurrence::ConstantTail);
        assert_eq!(r.joint_connectivity_intervals[..3], [(0.0, 2.0), (2.0, 6.0), (6.0, 10.0)]);
        assert_eq!(r.joint_connectivity_intervals[3], (10.0, 40.0));
    }

    #[test]
    fn disconnected_forever_is_not_admissible() {
        let r = validate_admissible(&SwitchingSchedule::constant(preset("fig1b").unwrap()), 40.0, 1e-10).unwrap();
        assert!(!r.admissible);
        assert!(r.joint_connectivity_intervals.is_empty());
    }

    #[test]
    fn unbalanced_member_flagged() {
        let one = WeightedDigraph::from_edges(6, &[Edge(1, 2, 1.0)]).unwrap();
        let s = SwitchingSchedule::round_robin(vec![preset("fig1a").unwrap(), one], 1.0).unwrap();
        let r = validate_admissible(&s, 10.0, 1e-10).unwrap();
        assert!(!r.all_balanced);
        assert!(!r.admissible);
    }

    #[test]
    fn switch_times_of_case2() {
        assert_eq!(case2_schedule().switch_times(40.0), vec![2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(case1_schedule().switch_times(9.0), vec![2.0, 4.0, 6.0, 8.0]);
    }
}
