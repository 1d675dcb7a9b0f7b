//! Segmentation of traces into fitting pattern executions.
//!
//! A trace is aligned against the backloop net of a model. Visible model moves
//! are not available, so every event is either matched synchronously or
//! skipped as a log move. Each firing of a backloop transition closes one
//! segment. The search minimises log moves first, then prefers more segments,
//! then fewer silent moves.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use crate::error::SegmentError;
use crate::event_log::{Activity, Trace};
use crate::petri_net::{AcceptingPetriNet, Marking, TransitionId};

/// Longest trace accepted by [`segment_bruteforce`].
pub const BRUTE_FORCE_MAX_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// An event matched by a visible transition with the same label.
    Sync {
        activity: Activity,
        transition: TransitionId,
    },
    /// An event the model does not explain.
    Log { activity: Activity },
    /// A silent transition firing (routing or backloop).
    ModelSilent { transition: TransitionId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Sync,
    Log,
    ModelSilent,
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Sync { .. } => MoveKind::Sync,
            Move::Log { .. } => MoveKind::Log,
            Move::ModelSilent { .. } => MoveKind::ModelSilent,
        }
    }

    pub fn transition(&self) -> Option<TransitionId> {
        match self {
            Move::Sync { transition, .. } | Move::ModelSilent { transition } => Some(*transition),
            Move::Log { .. } => None,
        }
    }
}

/// The fitting segments of one trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Segmentation {
    /// Alignment moves. Empty for results of [`segment_bruteforce`].
    pub moves: Vec<Move>,
    /// Fitting segments in trace order.
    pub segments: Vec<Trace>,
    /// For each segment, the trace positions of its events.
    pub positions: Vec<Vec<usize>>,
}

impl Segmentation {
    /// Number of segments.
    pub fn k(&self) -> usize {
        self.segments.len()
    }

    /// Number of events covered by segments.
    pub fn covered_events(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    pub fn log_moves(&self) -> usize {
        self.moves
            .iter()
            .filter(|m| m.kind() == MoveKind::Log)
            .count()
    }

    /// Occurrences of `a` inside segments.
    pub fn fitting_count(&self, a: &Activity) -> usize {
        self.segments.iter().map(|s| s.count(a)).sum()
    }
}

/// Lexicographic alignment cost: log moves, then syncs that did not open a
/// segment (fewer means more segments), then silent moves.
type Cost = (u32, u32, u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    /// At the initial marking, nothing fired since the last backloop.
    Idle,
    /// Something fired, but no event was matched yet.
    Opened,
    /// At least one event matched in the current segment.
    Matched,
}

#[derive(Clone, Copy)]
enum Step {
    Start,
    Sync(usize),
    Log,
    Silent(usize),
}

struct Node {
    pos: usize,
    marking: u32,
    phase: Phase,
    parent: usize,
    step: Step,
}

impl Phase {
    fn index(self) -> usize {
        match self {
            Phase::Idle => 0,
            Phase::Opened => 1,
            Phase::Matched => 2,
        }
    }
}

/// Reusable segmentation state for one backloop net. Reachable markings are
/// discovered lazily and shared by all traces segmented with it.
pub struct Segmenter<'a> {
    apn_bl: &'a AcceptingPetriNet,
    markings: Vec<Marking>,
    index: HashMap<Marking, u32>,
    /// Enabled transitions of each marking with the marking they lead to, by
    /// transition id.
    successors: Vec<Option<Vec<(usize, u32)>>>,
    start: u32,
    goal: u32,
}

impl<'a> Segmenter<'a> {
    pub fn new(apn_bl: &'a AcceptingPetriNet) -> Self {
        let mut seg = Segmenter {
            apn_bl,
            markings: Vec::new(),
            index: HashMap::new(),
            successors: Vec::new(),
            start: 0,
            goal: 0,
        };
        seg.start = seg.intern(apn_bl.initial().clone());
        seg.goal = seg.intern(apn_bl.finals()[0].clone());
        seg
    }

    fn intern(&mut self, m: Marking) -> u32 {
        if let Some(&id) = self.index.get(&m) {
            return id;
        }
        let id = self.markings.len() as u32;
        self.index.insert(m.clone(), id);
        self.markings.push(m);
        self.successors.push(None);
        id
    }

    fn expand(&mut self, id: u32) {
        if self.successors[id as usize].is_none() {
            let net = self.apn_bl.net();
            let mut out = Vec::new();
            for t in 0..net.transitions().len() {
                if net.is_enabled(&self.markings[id as usize], t) {
                    let next = net.fire_unchecked(&self.markings[id as usize], t);
                    out.push((t, self.intern(next)));
                }
            }
            self.successors[id as usize] = Some(out);
        }
    }

    /// Computes an optimal segmentation of `trace`; see [`segment`].
    pub fn segment(&mut self, trace: &Trace) -> Segmentation {
        let apn_bl = self.apn_bl;
        let transitions = apn_bl.net().transitions();
        let events = trace.events();
        let width = events.len() + 1;
        let state = |pos: usize, marking: u32, phase: Phase| {
            (marking as usize * 3 + phase.index()) * width + pos
        };
        let (start, goal) = (self.start, self.goal);

        let mut nodes: Vec<Node> = Vec::new();
        let mut best: Vec<Option<Cost>> = Vec::new();
        let mut closed: Vec<bool> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(Cost, usize)>> = BinaryHeap::new();

        let push = |nodes: &mut Vec<Node>,
                    heap: &mut BinaryHeap<Reverse<(Cost, usize)>>,
                    best: &mut Vec<Option<Cost>>,
                    node: Node,
                    cost: Cost| {
            let key = state(node.pos, node.marking, node.phase);
            if key >= best.len() {
                best.resize(key + 1, None);
            }
            if matches!(best[key], Some(c) if c <= cost) {
                return;
            }
            best[key] = Some(cost);
            heap.push(Reverse((cost, nodes.len())));
            nodes.push(node);
        };

        push(
            &mut nodes,
            &mut heap,
            &mut best,
            Node {
                pos: 0,
                marking: start,
                phase: Phase::Idle,
                parent: usize::MAX,
                step: Step::Start,
            },
            (0, 0, 0),
        );

        let end = loop {
            let Reverse((cost, idx)) = heap
                .pop()
                .expect("all-log alignment always reaches the goal");
            let (pos, marking, phase) = {
                let n = &nodes[idx];
                (n.pos, n.marking, n.phase)
            };
            let key = state(pos, marking, phase);
            if key >= closed.len() {
                closed.resize(key + 1, false);
            }
            if closed[key] {
                continue;
            }
            closed[key] = true;
            if pos == events.len() && phase == Phase::Idle && marking == goal {
                break idx;
            }

            self.expand(marking);
            let succ = self.successors[marking as usize]
                .as_deref()
                .expect("expanded");
            // Synchronous moves.
            if pos < events.len() {
                for &(t, next) in succ {
                    if transitions[t].label.as_ref() == Some(&events[pos]) {
                        let extra = u32::from(phase == Phase::Matched);
                        push(
                            &mut nodes,
                            &mut heap,
                            &mut best,
                            Node {
                                pos: pos + 1,
                                marking: next,
                                phase: Phase::Matched,
                                parent: idx,
                                step: Step::Sync(t),
                            },
                            (cost.0, cost.1 + extra, cost.2),
                        );
                    }
                }
            }
            // Silent model moves. A backloop may only close a segment that matched an event.
            for &(t, next) in succ {
                let tr = &transitions[t];
                if !tr.is_silent() {
                    continue;
                }
                let next_phase = if tr.is_backloop() {
                    if phase != Phase::Matched {
                        continue;
                    }
                    Phase::Idle
                } else if phase == Phase::Idle {
                    Phase::Opened
                } else {
                    phase
                };
                push(
                    &mut nodes,
                    &mut heap,
                    &mut best,
                    Node {
                        pos,
                        marking: next,
                        phase: next_phase,
                        parent: idx,
                        step: Step::Silent(t),
                    },
                    (cost.0, cost.1, cost.2 + 1),
                );
            }
            // Log move.
            if pos < events.len() {
                push(
                    &mut nodes,
                    &mut heap,
                    &mut best,
                    Node {
                        pos: pos + 1,
                        marking,
                        phase,
                        parent: idx,
                        step: Step::Log,
                    },
                    (cost.0 + 1, cost.1, cost.2),
                );
            }
        };
        build_segmentation(&nodes, end, events, transitions)
    }
}

/// Computes an optimal segmentation of `trace` on a backloop net.
///
/// The trace is expected to be projected on the net's labels already; events
/// with other labels can only be log moves. To segment many traces on the same
/// net, reuse a [`Segmenter`].
pub fn segment(apn_bl: &AcceptingPetriNet, trace: &Trace) -> Segmentation {
    Segmenter::new(apn_bl).segment(trace)
}

fn build_segmentation(
    nodes: &[Node],
    end: usize,
    events: &[Activity],
    transitions: &[crate::petri_net::Transition],
) -> Segmentation {
    let mut steps = Vec::new();
    let mut cur = end;
    while cur != usize::MAX {
        steps.push((nodes[cur].step, nodes[cur].pos));
        cur = nodes[cur].parent;
    }
    steps.reverse();

    let mut seg = Segmentation::default();
    let mut current: Vec<Activity> = Vec::new();
    let mut current_pos: Vec<usize> = Vec::new();
    for (step, pos_after) in steps {
        match step {
            Step::Start => {}
            Step::Sync(t) => {
                let activity = events[pos_after - 1].clone();
                current.push(activity.clone());
                current_pos.push(pos_after - 1);
                seg.moves.push(Move::Sync {
                    activity,
                    transition: TransitionId(t),
                });
            }
            Step::Log => seg.moves.push(Move::Log {
                activity: events[pos_after - 1].clone(),
            }),
            Step::Silent(t) => {
                seg.moves.push(Move::ModelSilent {
                    transition: TransitionId(t),
                });
                if transitions[t].is_backloop() {
                    seg.segments.push(Trace::new(std::mem::take(&mut current)));
                    seg.positions.push(std::mem::take(&mut current_pos));
                }
            }
        }
    }
    debug_assert!(current.is_empty());
    seg
}

/// Exhaustive reference segmentation on a net *without* backloop.
///
/// Segments are ordered, non-overlapping spans of the trace; inside a span
/// any subsequence may form the segment. Membership is checked against the
/// net's bounded language with bound `n`. Returns a decomposition with the
/// most covered events, then the most segments.
pub fn segment_bruteforce(
    apn: &AcceptingPetriNet,
    trace: &Trace,
    n: usize,
) -> Result<Segmentation, SegmentError> {
    let len = trace.len();
    if len > BRUTE_FORCE_MAX_LEN {
        return Err(SegmentError::TraceTooLong {
            len,
            limit: BRUTE_FORCE_MAX_LEN,
        });
    }
    if len == 0 {
        return Ok(Segmentation::default());
    }
    let language = apn.language(n)?;
    let events = trace.events();

    #[derive(Clone)]
    struct Best {
        score: (usize, usize),
        prev: usize,
        segment: Option<Vec<usize>>,
    }
    let mut best: Vec<Best> = vec![
        Best {
            score: (0, 0),
            prev: usize::MAX,
            segment: None,
        };
        len + 1
    ];
    for j in 1..=len {
        let mut cand = Best {
            score: best[j - 1].score,
            prev: j - 1,
            segment: None,
        };
        for (i, prefix) in best.iter().enumerate().take(j) {
            // Segment spans [i, j): it uses positions i and j-1 plus any subset in between.
            let inner: Vec<usize> = if j - i >= 2 {
                (i + 1..j - 1).collect()
            } else {
                Vec::new()
            };
            for mask in 0u32..(1u32 << inner.len()) {
                let mut positions = vec![i];
                positions.extend(
                    inner
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask & (1 << b) != 0)
                        .map(|(_, p)| *p),
                );
                if j - 1 != i {
                    positions.push(j - 1);
                }
                let word: Trace = positions.iter().map(|p| events[*p].clone()).collect();
                if !language.contains(&word) {
                    continue;
                }
                let score = (prefix.score.0 + positions.len(), prefix.score.1 + 1);
                if score > cand.score {
                    cand = Best {
                        score,
                        prev: i,
                        segment: Some(positions),
                    };
                }
            }
        }
        best[j] = cand;
    }

    let mut seg = Segmentation::default();
    let mut j = len;
    while j > 0 {
        let b = &best[j];
        if let Some(p) = &b.segment {
            seg.segments
                .push(p.iter().map(|i| events[*i].clone()).collect());
            seg.positions.push(p.clone());
        }
        j = b.prev;
    }
    seg.segments.reverse();
    seg.positions.reverse();
    Ok(seg)
}

/// Visits and enabled-transition count of one marking during replay.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MarkingVisits {
    pub visits: u64,
    pub enabled: u32,
}

/// Enabled-transition statistics gathered by replaying alignments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayStats {
    /// Number of transition firings.
    pub firing_count: u64,
    /// Sum over firings of the number of transitions enabled before firing.
    pub enabled_sum: u64,
    pub per_marking: BTreeMap<Marking, MarkingVisits>,
}

impl ReplayStats {
    /// Replays the model moves of `seg` on `apn_bl`, counting each firing
    /// `weight` times. Log moves leave the marking unchanged.
    pub fn record(
        &mut self,
        apn_bl: &AcceptingPetriNet,
        seg: &Segmentation,
        weight: u64,
    ) -> Result<(), SegmentError> {
        let mut marking = apn_bl.initial().clone();
        for (index, mv) in seg.moves.iter().enumerate() {
            let Some(t) = mv.transition() else { continue };
            let enabled = apn_bl.enabled(&marking);
            if !enabled.contains(&t) {
                return Err(SegmentError::ReplayDivergence { index });
            }
            let d = enabled.len() as u32;
            let entry = self.per_marking.entry(marking.clone()).or_default();
            entry.visits += weight;
            entry.enabled = d;
            self.firing_count += weight;
            self.enabled_sum += weight * d as u64;
            marking = apn_bl.fire(&marking, t)?;
        }
        Ok(())
    }
}

/// Replay statistics over a collection of segmentations.
pub fn replay_stats<'a>(
    apn_bl: &AcceptingPetriNet,
    segmentations: impl IntoIterator<Item = &'a Segmentation>,
) -> Result<ReplayStats, SegmentError> {
    let mut stats = ReplayStats::default();
    for seg in segmentations {
        stats.record(apn_bl, seg, 1)?;
    }
    Ok(stats)
}
