//! Labeled and accepting Petri nets, translation from process trees, and the
//! backloop transformation used for segmentation.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::NetError;
use crate::event_log::{Activity, Trace};
use crate::process_tree::{LanguageSet, Operator, ProcessTree};

/// Default cap on visited states during language enumeration.
pub const DEFAULT_STATE_LIMIT: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub usize);

impl fmt::Display for PlaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    /// `None` is the silent label.
    pub label: Option<Activity>,
    pub inputs: Vec<PlaceId>,
    pub outputs: Vec<PlaceId>,
    /// Index of the final marking this transition loops back from, for
    /// transitions added by [`AcceptingPetriNet::add_backloop`].
    pub backloop_of: Option<usize>,
}

impl Transition {
    pub fn is_silent(&self) -> bool {
        self.label.is_none()
    }

    pub fn is_backloop(&self) -> bool {
        self.backloop_of.is_some()
    }
}

/// A labeled Petri net. Arcs are stored as the input and output place lists
/// of each transition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledPetriNet {
    num_places: usize,
    transitions: Vec<Transition>,
}

impl LabeledPetriNet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self) -> PlaceId {
        self.num_places += 1;
        PlaceId(self.num_places - 1)
    }

    /// Adds a transition. Panics if an endpoint is not a place of this net.
    pub fn add_transition(
        &mut self,
        label: Option<Activity>,
        inputs: &[PlaceId],
        outputs: &[PlaceId],
    ) -> TransitionId {
        for p in inputs.iter().chain(outputs) {
            assert!(p.0 < self.num_places, "unknown place {p}");
        }
        self.transitions.push(Transition {
            label,
            inputs: inputs.to_vec(),
            outputs: outputs.to_vec(),
            backloop_of: None,
        });
        TransitionId(self.transitions.len() - 1)
    }

    pub fn num_places(&self) -> usize {
        self.num_places
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.num_places).map(PlaceId)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.0]
    }

    /// The visible labels used by the net.
    pub fn label_alphabet(&self) -> BTreeSet<Activity> {
        self.transitions
            .iter()
            .filter_map(|t| t.label.clone())
            .collect()
    }

    /// All arcs, place-to-transition first, in id order.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            for p in &t.inputs {
                out.push(Arc::PlaceToTransition(*p, TransitionId(i)));
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            for p in &t.outputs {
                out.push(Arc::TransitionToPlace(TransitionId(i), *p));
            }
        }
        out
    }

    fn producers(&self, p: PlaceId) -> Vec<usize> {
        (0..self.transitions.len())
            .filter(|&i| self.transitions[i].outputs.contains(&p))
            .collect()
    }

    fn consumers(&self, p: PlaceId) -> Vec<usize> {
        (0..self.transitions.len())
            .filter(|&i| self.transitions[i].inputs.contains(&p))
            .collect()
    }

    /// Transitions enabled in `m`.
    pub fn enabled(&self, m: &Marking) -> Vec<TransitionId> {
        (0..self.transitions.len())
            .filter(|&i| self.is_enabled(m, i))
            .map(TransitionId)
            .collect()
    }

    pub(crate) fn is_enabled(&self, m: &Marking, t: usize) -> bool {
        // Inputs are a multiset: a place listed twice needs two tokens.
        let inputs = &self.transitions[t].inputs;
        inputs.iter().all(|p| {
            let need = inputs.iter().filter(|q| *q == p).count() as u32;
            m.tokens(*p) >= need
        })
    }

    /// Fires `t` in `m`: `m - •t + t•`.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        if t.0 >= self.transitions.len() || !self.is_enabled(m, t.0) {
            return Err(NetError::NotEnabled { transition: t.0 });
        }
        Ok(self.fire_unchecked(m, t.0))
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: usize) -> Marking {
        let mut next = m.clone();
        let tr = &self.transitions[t];
        for p in &tr.inputs {
            next.counts[p.0] -= 1;
        }
        for p in &tr.outputs {
            next.counts[p.0] += 1;
        }
        next
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arc {
    PlaceToTransition(PlaceId, TransitionId),
    TransitionToPlace(TransitionId, PlaceId),
}

/// A multiset of places, stored densely per place index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking {
    counts: Vec<u32>,
}

impl Marking {
    pub fn empty(num_places: usize) -> Self {
        Marking {
            counts: vec![0; num_places],
        }
    }

    pub fn from_places(num_places: usize, places: impl IntoIterator<Item = PlaceId>) -> Self {
        let mut m = Self::empty(num_places);
        for p in places {
            m.counts[p.0] += 1;
        }
        m
    }

    pub fn tokens(&self, p: PlaceId) -> u32 {
        self.counts.get(p.0).copied().unwrap_or(0)
    }

    pub fn num_places(&self) -> usize {
        self.counts.len()
    }

    /// Places holding at least one token.
    pub fn support(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, _)| PlaceId(i))
    }

    /// `self ≤ other` pointwise.
    pub fn is_sub_multiset(&self, other: &Marking) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }
}

impl fmt::Debug for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for (i, c) in self.counts.iter().enumerate() {
            for _ in 0..*c {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "p{i}")?;
            }
        }
        f.write_str("]")
    }
}

/// A labeled Petri net with an initial marking and a set of final markings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptingPetriNet {
    net: LabeledPetriNet,
    initial: Marking,
    finals: Vec<Marking>,
}

impl AcceptingPetriNet {
    /// Fails when the final markings are empty, contain one another, or a
    /// marking does not match the net's place count.
    pub fn new(
        net: LabeledPetriNet,
        initial: Marking,
        finals: Vec<Marking>,
    ) -> Result<Self, NetError> {
        for m in std::iter::once(&initial).chain(&finals) {
            if m.num_places() != net.num_places() {
                return Err(NetError::MarkingSize {
                    expected: net.num_places(),
                    got: m.num_places(),
                });
            }
        }
        if finals.is_empty() {
            return Err(NetError::NoFinalMarking);
        }
        for (i, a) in finals.iter().enumerate() {
            for (j, b) in finals.iter().enumerate() {
                if i != j && a.is_sub_multiset(b) {
                    return Err(NetError::NestedFinalMarkings);
                }
            }
        }
        Ok(AcceptingPetriNet {
            net,
            initial,
            finals,
        })
    }

    pub fn net(&self) -> &LabeledPetriNet {
        &self.net
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn finals(&self) -> &[Marking] {
        &self.finals
    }

    pub fn is_final(&self, m: &Marking) -> bool {
        self.finals.contains(m)
    }

    pub fn enabled(&self, m: &Marking) -> Vec<TransitionId> {
        self.net.enabled(m)
    }

    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
        self.net.fire(m, t)
    }

    /// Backloop transitions, indexed by the final marking they leave from.
    pub fn backloop_transitions(&self) -> Vec<(usize, TransitionId)> {
        self.net
            .transitions
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.backloop_of.map(|m| (m, TransitionId(i))))
            .collect()
    }

    /// Adds one silent transition per final marking, consuming that marking
    /// and producing the initial marking. The result's only final marking is
    /// the initial marking.
    pub fn add_backloop(&self) -> AcceptingPetriNet {
        let mut net = self.net.clone();
        for (i, m) in self.finals.iter().enumerate() {
            let inputs: Vec<PlaceId> = expand_multiset(m);
            let outputs: Vec<PlaceId> = expand_multiset(&self.initial);
            let t = net.add_transition(None, &inputs, &outputs);
            net.transitions[t.0].backloop_of = Some(i);
        }
        AcceptingPetriNet {
            net,
            initial: self.initial.clone(),
            finals: vec![self.initial.clone()],
        }
    }

    /// Visible-label sequences of length at most `n` leading from the initial
    /// marking to a final marking, with the default state limit.
    pub fn language(&self, n: usize) -> Result<LanguageSet, NetError> {
        self.language_with_limit(n, DEFAULT_STATE_LIMIT)
    }

    /// Breadth-first enumeration over (marking, visible prefix) states. At
    /// most `|T|` consecutive silent firings are explored.
    pub fn language_with_limit(&self, n: usize, limit: usize) -> Result<LanguageSet, NetError> {
        if n == 0 {
            return Err(NetError::ZeroBound);
        }
        let max_silent = self.net.transitions.len();
        let mut seen: HashSet<(Marking, Vec<Activity>)> = HashSet::new();
        let mut queue: VecDeque<(Marking, Vec<Activity>, usize)> = VecDeque::new();
        let mut traces = BTreeSet::new();
        seen.insert((self.initial.clone(), Vec::new()));
        queue.push_back((self.initial.clone(), Vec::new(), 0));
        while let Some((m, word, silent_run)) = queue.pop_front() {
            if self.is_final(&m) {
                traces.insert(Trace::new(word.clone()));
            }
            for t in 0..self.net.transitions.len() {
                if !self.net.is_enabled(&m, t) {
                    continue;
                }
                let tr = &self.net.transitions[t];
                let (next_word, next_run) = match &tr.label {
                    Some(a) if word.len() < n => {
                        let mut w = word.clone();
                        w.push(a.clone());
                        (w, 0)
                    }
                    Some(_) => continue,
                    None if silent_run < max_silent => (word.clone(), silent_run + 1),
                    None => continue,
                };
                let next = self.net.fire_unchecked(&m, t);
                if seen.insert((next.clone(), next_word.clone())) {
                    if seen.len() > limit {
                        return Err(NetError::StateSpaceExceeded { limit });
                    }
                    queue.push_back((next, next_word, next_run));
                }
            }
        }
        Ok(LanguageSet {
            traces,
            bound: Some(n),
        })
    }
}

fn expand_multiset(m: &Marking) -> Vec<PlaceId> {
    let mut out = Vec::new();
    for p in m.support() {
        for _ in 0..m.tokens(p) {
            out.push(p);
        }
    }
    out
}

/// Translates a process tree into an accepting Petri net with one initial
/// and one final place.
pub fn to_petri_net(tree: &ProcessTree) -> AcceptingPetriNet {
    let mut b = Builder::default();
    let frag = b.build(tree);
    b.finish(frag)
}

/// Entry and exit place of a translated subtree.
#[derive(Clone, Copy)]
struct Fragment {
    entry: usize,
    exit: usize,
}

/// Mutable net under construction. Places can be merged; dead places are
/// dropped when the net is finalized.
#[derive(Default)]
struct Builder {
    place_alive: Vec<bool>,
    transitions: Vec<(Option<Activity>, Vec<usize>, Vec<usize>)>,
}

impl Builder {
    fn place(&mut self) -> usize {
        self.place_alive.push(true);
        self.place_alive.len() - 1
    }

    fn transition(&mut self, label: Option<Activity>, inputs: Vec<usize>, outputs: Vec<usize>) {
        self.transitions.push((label, inputs, outputs));
    }

    fn has_incoming(&self, p: usize) -> bool {
        self.transitions.iter().any(|(_, _, o)| o.contains(&p))
    }

    fn has_outgoing(&self, p: usize) -> bool {
        self.transitions.iter().any(|(_, i, _)| i.contains(&p))
    }

    /// Replaces every use of `from` by `into`.
    fn merge(&mut self, from: usize, into: usize) {
        if from == into {
            return;
        }
        for (_, ins, outs) in &mut self.transitions {
            for p in ins.iter_mut().chain(outs.iter_mut()) {
                if *p == from {
                    *p = into;
                }
            }
        }
        self.place_alive[from] = false;
    }

    fn build(&mut self, tree: &ProcessTree) -> Fragment {
        match tree {
            ProcessTree::Tau | ProcessTree::Leaf(_) => {
                let entry = self.place();
                let exit = self.place();
                let label = match tree {
                    ProcessTree::Leaf(a) => Some(a.clone()),
                    _ => None,
                };
                self.transition(label, vec![entry], vec![exit]);
                Fragment { entry, exit }
            }
            ProcessTree::Node(Operator::Seq, l, r) => {
                let l = self.build(l);
                let r = self.build(r);
                // Fusing is unsound when the left child can leave its exit
                // place and the right child can return to its entry place.
                if self.has_outgoing(l.exit) && self.has_incoming(r.entry) {
                    self.transition(None, vec![l.exit], vec![r.entry]);
                } else {
                    self.merge(r.entry, l.exit);
                }
                Fragment {
                    entry: l.entry,
                    exit: r.exit,
                }
            }
            ProcessTree::Node(Operator::Xor, l, r) => {
                let l = self.build(l);
                let r = self.build(r);
                let entry = self.join_entries(l.entry, r.entry);
                let exit = self.join_exits(l.exit, r.exit);
                Fragment { entry, exit }
            }
            ProcessTree::Node(Operator::And, l, r) => {
                let l = self.build(l);
                let r = self.build(r);
                let entry = self.place();
                let exit = self.place();
                self.transition(None, vec![entry], vec![l.entry, r.entry]);
                self.transition(None, vec![l.exit, r.exit], vec![exit]);
                Fragment { entry, exit }
            }
            ProcessTree::Node(Operator::Loop, body, redo) => {
                let body = self.build(body);
                let redo = self.build(redo);
                if self.has_incoming(redo.entry) {
                    self.transition(None, vec![body.exit], vec![redo.entry]);
                } else {
                    self.merge(redo.entry, body.exit);
                }
                if self.has_outgoing(redo.exit) {
                    self.transition(None, vec![redo.exit], vec![body.entry]);
                } else {
                    self.merge(redo.exit, body.entry);
                }
                body
            }
        }
    }

    /// Shared entry place for a choice. Children that can re-enter their
    /// entry place get a silent guard instead of sharing it.
    fn join_entries(&mut self, a: usize, b: usize) -> usize {
        let (da, db) = (self.has_incoming(a), self.has_incoming(b));
        match (da, db) {
            (false, false) => {
                self.merge(b, a);
                a
            }
            (false, true) => {
                self.transition(None, vec![a], vec![b]);
                a
            }
            (true, false) => {
                self.transition(None, vec![b], vec![a]);
                b
            }
            (true, true) => {
                let p = self.place();
                self.transition(None, vec![p], vec![a]);
                self.transition(None, vec![p], vec![b]);
                p
            }
        }
    }

    fn join_exits(&mut self, a: usize, b: usize) -> usize {
        let (da, db) = (self.has_outgoing(a), self.has_outgoing(b));
        match (da, db) {
            (false, false) => {
                self.merge(b, a);
                a
            }
            (false, true) => {
                self.transition(None, vec![b], vec![a]);
                a
            }
            (true, false) => {
                self.transition(None, vec![a], vec![b]);
                b
            }
            (true, true) => {
                let p = self.place();
                self.transition(None, vec![a], vec![p]);
                self.transition(None, vec![b], vec![p]);
                p
            }
        }
    }

    /// Folds a silent transition into its unique predecessor when the place
    /// between them is private to the pair: `u -> p -> τ` becomes `u -> τ•`.
    fn reduce(&mut self, entry: usize, exit: usize) {
        loop {
            let mut folded = false;
            for t in 0..self.transitions.len() {
                let (label, ins, _) = &self.transitions[t];
                if label.is_some() || ins.len() != 1 {
                    continue;
                }
                let p = ins[0];
                if p == entry || p == exit {
                    continue;
                }
                let producers: Vec<usize> = (0..self.transitions.len())
                    .filter(|&i| self.transitions[i].2.contains(&p))
                    .collect();
                let consumers = (0..self.transitions.len())
                    .filter(|&i| self.transitions[i].1.contains(&p))
                    .count();
                if producers.len() != 1 || consumers != 1 || producers[0] == t {
                    continue;
                }
                let u = producers[0];
                if self.transitions[u].2.iter().filter(|q| **q == p).count() != 1 {
                    continue;
                }
                let outs = self.transitions[t].2.clone();
                let u_outs = &mut self.transitions[u].2;
                u_outs.retain(|q| *q != p);
                u_outs.extend(outs);
                self.transitions.remove(t);
                self.place_alive[p] = false;
                folded = true;
                break;
            }
            if !folded {
                break;
            }
        }
    }

    fn finish(mut self, frag: Fragment) -> AcceptingPetriNet {
        self.reduce(frag.entry, frag.exit);
        // Renumber live places in creation order.
        let mut index = vec![usize::MAX; self.place_alive.len()];
        let mut net = LabeledPetriNet::new();
        for (p, alive) in self.place_alive.iter().enumerate() {
            if *alive {
                index[p] = net.add_place().0;
            }
        }
        for (label, ins, outs) in self.transitions {
            let ins: Vec<PlaceId> = ins.iter().map(|p| PlaceId(index[*p])).collect();
            let outs: Vec<PlaceId> = outs.iter().map(|p| PlaceId(index[*p])).collect();
            net.add_transition(label, &ins, &outs);
        }
        let n = net.num_places();
        let initial = Marking::from_places(n, [PlaceId(index[frag.entry])]);
        let fin = Marking::from_places(n, [PlaceId(index[frag.exit])]);
        AcceptingPetriNet::new(net, initial, vec![fin]).expect("single final marking")
    }
}

impl LabeledPetriNet {
    /// Places with no producing transition.
    pub fn source_places(&self) -> Vec<PlaceId> {
        self.places()
            .filter(|p| self.producers(*p).is_empty())
            .collect()
    }

    /// Places with no consuming transition.
    pub fn sink_places(&self) -> Vec<PlaceId> {
        self.places()
            .filter(|p| self.consumers(*p).is_empty())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(s: &str) -> ProcessTree {
        s.parse().unwrap()
    }

    fn lang(ws: &[&str]) -> BTreeSet<Trace> {
        ws.iter()
            .map(|w| Trace::from_names(w.split_whitespace()))
            .collect()
    }

    fn find(apn: &AcceptingPetriNet, label: &str) -> TransitionId {
        let i = apn
            .net()
            .transitions()
            .iter()
            .position(|t| t.label.as_ref().map(|a| a.name()) == Some(label))
            .unwrap();
        TransitionId(i)
    }

    #[test]
    fn sequence_with_parallel_tail_has_no_entry_split() {
        let apn = to_petri_net(&tree("seq(A,and(B,C))"));
        let net = apn.net();
        // A, B, C and the silent join.
        assert_eq!(net.transitions().len(), 4);
        assert_eq!(
            net.transitions().iter().filter(|t| t.is_silent()).count(),
            1
        );
        assert_eq!(net.num_places(), 6);
        let a = find(&apn, "A");
        assert_eq!(net.transition(a).outputs.len(), 2);
        assert_eq!(apn.language(5).unwrap().traces, lang(&["A B C", "A C B"]));
    }

    #[test]
    fn enabled_and_fire_on_backloop_net() {
        let apn = to_petri_net(&tree("seq(A,and(B,C))")).add_backloop();
        let m0 = apn.initial().clone();
        let a = find(&apn, "A");
        assert_eq!(apn.enabled(&m0), vec![a]);
        let m1 = apn.fire(&m0, a).unwrap();
        assert_eq!(m1.total(), 2);
        let en = apn.enabled(&m1);
        assert_eq!(en.len(), 2);
        assert!(en.contains(&find(&apn, "B")) && en.contains(&find(&apn, "C")));
        assert!(apn.enabled(&Marking::empty(m0.num_places())).is_empty());
        // Disabled firing is rejected.
        assert_eq!(
            apn.fire(&m0, find(&apn, "B")),
            Err(NetError::NotEnabled {
                transition: find(&apn, "B").0
            })
        );
        // A, C, B, join, backloop returns to the initial marking.
        let mut m = m1;
        for label in ["C", "B"] {
            m = apn.fire(&m, find(&apn, label)).unwrap();
        }
        let silent: Vec<TransitionId> = apn.enabled(&m);
        assert_eq!(silent.len(), 1);
        m = apn.fire(&m, silent[0]).unwrap();
        assert_eq!(m, to_petri_net(&tree("seq(A,and(B,C))")).finals()[0]);
        let bl = apn.backloop_transitions();
        assert_eq!(bl.len(), 1);
        assert_eq!(apn.enabled(&m), vec![bl[0].1]);
        m = apn.fire(&m, bl[0].1).unwrap();
        assert_eq!(&m, apn.initial());
    }

    #[test]
    fn backloop_structure() {
        let apn = to_petri_net(&tree("seq(A,and(B,C))"));
        let bl = apn.add_backloop();
        assert_eq!(bl.net().num_places(), apn.net().num_places());
        assert_eq!(bl.finals(), &[apn.initial().clone()]);
        assert_eq!(
            bl.net().transitions().len(),
            apn.net().transitions().len() + 1
        );
        let (idx, t) = bl.backloop_transitions()[0];
        assert_eq!(idx, 0);
        let tr = bl.net().transition(t);
        assert!(tr.is_silent());
        assert_eq!(tr.inputs, apn.finals()[0].support().collect::<Vec<_>>());
        assert_eq!(tr.outputs, apn.initial().support().collect::<Vec<_>>());
    }

    #[test]
    fn backloop_per_final_marking() {
        let mut net = LabeledPetriNet::new();
        let p0 = net.add_place();
        let p1 = net.add_place();
        let p2 = net.add_place();
        net.add_transition(Some(Activity::new("a")), &[p0], &[p1]);
        net.add_transition(Some(Activity::new("b")), &[p0], &[p2]);
        let apn = AcceptingPetriNet::new(
            net,
            Marking::from_places(3, [p0]),
            vec![Marking::from_places(3, [p1]), Marking::from_places(3, [p2])],
        )
        .unwrap();
        let bl = apn.add_backloop();
        let loops = bl.backloop_transitions();
        assert_eq!(loops.len(), 2);
        assert_eq!(loops[0].0, 0);
        assert_eq!(loops[1].0, 1);
        assert_eq!(bl.finals().len(), 1);
    }

    #[test]
    fn nested_final_markings_rejected() {
        let mut net = LabeledPetriNet::new();
        let p0 = net.add_place();
        let p1 = net.add_place();
        let err = AcceptingPetriNet::new(
            net,
            Marking::from_places(2, [p0]),
            vec![
                Marking::from_places(2, [p1]),
                Marking::from_places(2, [p0, p1]),
            ],
        )
        .unwrap_err();
        assert_eq!(err, NetError::NestedFinalMarkings);
    }

    #[test]
    fn small_languages() {
        assert_eq!(
            to_petri_net(&tree("seq(a,b)")).language(5).unwrap().traces,
            lang(&["a b"])
        );
        assert_eq!(
            to_petri_net(&tree("loop(a,b)")).language(3).unwrap().traces,
            lang(&["a", "a b a"])
        );
        assert!(to_petri_net(&tree("seq(a,b)"))
            .language(1)
            .unwrap()
            .is_empty());
        assert_eq!(
            to_petri_net(&tree("a")).language(1).unwrap().traces,
            lang(&["a"])
        );
        assert_eq!(
            to_petri_net(&tree("a")).language(0),
            Err(NetError::ZeroBound)
        );
        assert_eq!(
            to_petri_net(&tree("xor(loop(a,b),and(c,d))"))
                .language(5)
                .unwrap()
                .traces,
            lang(&["a", "a b a", "a b a b a", "c d", "d c"])
        );
    }

    #[test]
    fn fused_loops_stay_sound() {
        for s in [
            "seq(loop(a,b),loop(c,d))",
            "xor(loop(a,b),c)",
            "loop(a,loop(b,c))",
            "loop(loop(a,b),c)",
            "xor(loop(a,b),loop(c,d))",
            "loop(xor(a,b),loop(c,d))",
        ] {
            let t = tree(s);
            assert_eq!(
                to_petri_net(&t).language(7).unwrap().traces,
                t.language(7).traces,
                "{s}"
            );
        }
    }

    #[test]
    fn state_limit() {
        let apn = to_petri_net(&tree("loop(and(a,b),and(c,d))"));
        assert_eq!(
            apn.language_with_limit(12, 10),
            Err(NetError::StateSpaceExceeded { limit: 10 })
        );
    }
}
