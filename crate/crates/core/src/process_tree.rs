//! Binary process trees, their bounded languages, and candidate expansion.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::event_log::{Activity, Trace};

/// Process tree operators. Every operator node has exactly two children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operator {
    /// Left child, then right child.
    Seq,
    /// Exactly one of the children.
    Xor,
    /// Both children, interleaved.
    And,
    /// Left child is the `do` part, right child the `redo` part: `do (redo do)*`.
    Loop,
}

impl Operator {
    pub fn keyword(self) -> &'static str {
        match self {
            Operator::Seq => "seq",
            Operator::Xor => "xor",
            Operator::And => "and",
            Operator::Loop => "loop",
        }
    }

    fn from_keyword(s: &str) -> Option<Operator> {
        match s {
            "seq" => Some(Operator::Seq),
            "xor" => Some(Operator::Xor),
            "and" => Some(Operator::And),
            "loop" => Some(Operator::Loop),
            _ => None,
        }
    }

    /// Operators whose operands commute and associate.
    pub fn is_symmetric(self) -> bool {
        matches!(self, Operator::Xor | Operator::And)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTree {
    /// Silent leaf. Representable, never produced by expansion.
    Tau,
    Leaf(Activity),
    Node(Operator, Box<ProcessTree>, Box<ProcessTree>),
}

impl ProcessTree {
    pub fn leaf(name: impl AsRef<str>) -> Self {
        ProcessTree::Leaf(Activity::new(name))
    }

    pub fn node(op: Operator, left: ProcessTree, right: ProcessTree) -> Self {
        ProcessTree::Node(op, Box::new(left), Box::new(right))
    }

    pub fn seq(left: ProcessTree, right: ProcessTree) -> Self {
        Self::node(Operator::Seq, left, right)
    }

    pub fn xor(left: ProcessTree, right: ProcessTree) -> Self {
        Self::node(Operator::Xor, left, right)
    }

    pub fn and(left: ProcessTree, right: ProcessTree) -> Self {
        Self::node(Operator::And, left, right)
    }

    pub fn looped(body: ProcessTree, redo: ProcessTree) -> Self {
        Self::node(Operator::Loop, body, redo)
    }

    /// Left-to-right activity leaves; duplicates are kept.
    pub fn leaves(&self) -> Vec<Activity> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Activity>) {
        match self {
            ProcessTree::Tau => {}
            ProcessTree::Leaf(a) => out.push(a.clone()),
            ProcessTree::Node(_, l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// The label set of the model.
    pub fn activities(&self) -> BTreeSet<Activity> {
        self.leaves().into_iter().collect()
    }

    /// Number of leaves, silent ones included.
    pub fn leaf_count(&self) -> usize {
        match self {
            ProcessTree::Tau | ProcessTree::Leaf(_) => 1,
            ProcessTree::Node(_, l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    pub fn contains_loop(&self) -> bool {
        match self {
            ProcessTree::Tau | ProcessTree::Leaf(_) => false,
            ProcessTree::Node(op, l, r) => {
                *op == Operator::Loop || l.contains_loop() || r.contains_loop()
            }
        }
    }

    /// Longest trace of a loop-free tree.
    fn max_trace_len(&self) -> usize {
        match self {
            ProcessTree::Tau => 0,
            ProcessTree::Leaf(_) => 1,
            ProcessTree::Node(Operator::Xor, l, r) => l.max_trace_len().max(r.max_trace_len()),
            ProcessTree::Node(_, l, r) => l.max_trace_len() + r.max_trace_len(),
        }
    }

    /// All traces of length at most `n`.
    ///
    /// Panics if `n == 0`.
    pub fn language(&self, n: usize) -> LanguageSet {
        assert!(n >= 1, "language bound must be positive");
        let traces = bounded_language(self, n)
            .into_iter()
            .map(Trace::new)
            .collect();
        let bound = if !self.contains_loop() && self.max_trace_len() <= n {
            None
        } else {
            Some(n)
        };
        LanguageSet { traces, bound }
    }

    /// Normal form for the symmetric operators: nested `xor`/`and` chains are
    /// flattened, their operands sorted by textual encoding and rebuilt
    /// right-nested. `seq` and `loop` keep their operand order.
    pub fn canonical_form(&self) -> ProcessTree {
        match self {
            ProcessTree::Tau | ProcessTree::Leaf(_) => self.clone(),
            ProcessTree::Node(op, l, r) if op.is_symmetric() => {
                let mut operands = Vec::new();
                flatten(*op, l, &mut operands);
                flatten(*op, r, &mut operands);
                let mut keyed: Vec<(String, ProcessTree)> = operands
                    .into_iter()
                    .map(|t| {
                        let c = t.canonical_form();
                        (c.to_string(), c)
                    })
                    .collect();
                keyed.sort_by(|a, b| a.0.cmp(&b.0));
                let mut iter = keyed.into_iter().rev().map(|(_, t)| t);
                let mut acc = iter.next().expect("symmetric node has operands");
                for t in iter {
                    acc = ProcessTree::node(*op, t, acc);
                }
                acc
            }
            ProcessTree::Node(op, l, r) => {
                ProcessTree::node(*op, l.canonical_form(), r.canonical_form())
            }
        }
    }

    /// All single-step expansions over `alphabet`, one per (leaf, activity,
    /// shape). With `b == a` the two sequence shapes (and the two loop shapes)
    /// produce the same tree; callers that need distinct candidates
    /// deduplicate by [`ProcessTree::canonical_form`].
    pub fn expansions(&self, alphabet: &BTreeSet<Activity>) -> Vec<ProcessTree> {
        self.expansions_with(alphabet, ShapeSet::ALL)
    }

    /// Expansions restricted to the given shapes.
    ///
    /// Every leaf `a` is replaced, for each `b` in `alphabet`, by each allowed
    /// shape. When the parent of `a` is `xor` (resp. `and`) and `a` is its left
    /// child, the `xor` (resp. `and`) shape is skipped: the same tree is
    /// reachable by expanding the right sibling side.
    pub fn expansions_with(
        &self,
        alphabet: &BTreeSet<Activity>,
        shapes: ShapeSet,
    ) -> Vec<ProcessTree> {
        let mut out = Vec::new();
        expand_rec(self, None, alphabet, shapes, &mut |t| out.push(t));
        out
    }
}

fn flatten(op: Operator, tree: &ProcessTree, out: &mut Vec<ProcessTree>) {
    match tree {
        ProcessTree::Node(o, l, r) if *o == op => {
            flatten(op, l, out);
            flatten(op, r, out);
        }
        other => out.push(other.clone()),
    }
}

/// Position of a node relative to its parent.
#[derive(Clone, Copy)]
struct ParentInfo {
    op: Operator,
    is_left: bool,
}

fn expand_rec(
    tree: &ProcessTree,
    parent: Option<ParentInfo>,
    alphabet: &BTreeSet<Activity>,
    shapes: ShapeSet,
    emit: &mut dyn FnMut(ProcessTree),
) {
    match tree {
        ProcessTree::Tau => {}
        ProcessTree::Leaf(a) => {
            for b in alphabet {
                for shape in shapes.iter() {
                    // Same-operator expansion of a left child duplicates the right one.
                    let suppressed = matches!(
                        (shape, parent),
                        (
                            ExpansionShape::Xor,
                            Some(ParentInfo {
                                op: Operator::Xor,
                                is_left: true
                            })
                        ) | (
                            ExpansionShape::And,
                            Some(ParentInfo {
                                op: Operator::And,
                                is_left: true
                            })
                        )
                    );
                    if !suppressed {
                        emit(shape.apply(a, b));
                    }
                }
            }
        }
        ProcessTree::Node(op, l, r) => {
            let left_parent = Some(ParentInfo {
                op: *op,
                is_left: true,
            });
            expand_rec(l, left_parent, alphabet, shapes, &mut |nl| {
                emit(ProcessTree::node(*op, nl, (**r).clone()))
            });
            let right_parent = Some(ParentInfo {
                op: *op,
                is_left: false,
            });
            expand_rec(r, right_parent, alphabet, shapes, &mut |nr| {
                emit(ProcessTree::node(*op, (**l).clone(), nr))
            });
        }
    }
}

/// The six ways a leaf `a` can grow with a new activity `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExpansionShape {
    /// `seq(a,b)`
    SeqRight,
    /// `seq(b,a)`
    SeqLeft,
    /// `and(a,b)`
    And,
    /// `xor(a,b)`
    Xor,
    /// `loop(a,b)`
    LoopRight,
    /// `loop(b,a)`
    LoopLeft,
}

impl ExpansionShape {
    pub const ALL: [ExpansionShape; 6] = [
        ExpansionShape::SeqRight,
        ExpansionShape::SeqLeft,
        ExpansionShape::And,
        ExpansionShape::Xor,
        ExpansionShape::LoopRight,
        ExpansionShape::LoopLeft,
    ];

    pub fn apply(self, a: &Activity, b: &Activity) -> ProcessTree {
        let a = ProcessTree::Leaf(a.clone());
        let b = ProcessTree::Leaf(b.clone());
        match self {
            ExpansionShape::SeqRight => ProcessTree::seq(a, b),
            ExpansionShape::SeqLeft => ProcessTree::seq(b, a),
            ExpansionShape::And => ProcessTree::and(a, b),
            ExpansionShape::Xor => ProcessTree::xor(a, b),
            ExpansionShape::LoopRight => ProcessTree::looped(a, b),
            ExpansionShape::LoopLeft => ProcessTree::looped(b, a),
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// A set of expansion shapes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShapeSet(u8);

impl ShapeSet {
    pub const EMPTY: ShapeSet = ShapeSet(0);
    pub const ALL: ShapeSet = ShapeSet(0b11_1111);

    pub fn contains(self, shape: ExpansionShape) -> bool {
        self.0 & shape.bit() != 0
    }

    pub fn insert(&mut self, shape: ExpansionShape) {
        self.0 |= shape.bit();
    }

    pub fn remove(&mut self, shape: ExpansionShape) {
        self.0 &= !shape.bit();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = ExpansionShape> {
        ExpansionShape::ALL
            .into_iter()
            .filter(move |s| self.contains(*s))
    }
}

impl FromIterator<ExpansionShape> for ShapeSet {
    fn from_iter<I: IntoIterator<Item = ExpansionShape>>(iter: I) -> Self {
        let mut set = ShapeSet::EMPTY;
        for s in iter {
            set.insert(s);
        }
        set
    }
}

/// A finite set of traces, optionally truncated at a length bound.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LanguageSet {
    pub traces: BTreeSet<Trace>,
    /// `None` when the set is the complete (finite) language.
    pub bound: Option<usize>,
}

impl LanguageSet {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, trace: &Trace) -> bool {
        self.traces.contains(trace)
    }
}

type Word = Vec<Activity>;

fn bounded_language(tree: &ProcessTree, n: usize) -> BTreeSet<Word> {
    match tree {
        ProcessTree::Tau => BTreeSet::from([Vec::new()]),
        ProcessTree::Leaf(a) => BTreeSet::from([vec![a.clone()]]),
        ProcessTree::Node(op, l, r) => {
            let left = bounded_language(l, n);
            let right = bounded_language(r, n);
            match op {
                Operator::Xor => left.union(&right).cloned().collect(),
                Operator::Seq => concat(&left, &right, n),
                Operator::And => {
                    let mut out = BTreeSet::new();
                    for x in &left {
                        for y in &right {
                            if x.len() + y.len() <= n {
                                shuffle(x, y, &mut Vec::new(), &mut out);
                            }
                        }
                    }
                    out
                }
                Operator::Loop => {
                    let mut out = left.clone();
                    let mut frontier = left.clone();
                    let redo_do = concat(&right, &left, n);
                    while !frontier.is_empty() {
                        let next: BTreeSet<Word> = concat(&frontier, &redo_do, n)
                            .into_iter()
                            .filter(|w| !out.contains(w))
                            .collect();
                        out.extend(next.iter().cloned());
                        frontier = next;
                    }
                    out
                }
            }
        }
    }
}

fn concat(left: &BTreeSet<Word>, right: &BTreeSet<Word>, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for x in left {
        for y in right {
            if x.len() + y.len() <= n {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                out.insert(w);
            }
        }
    }
    out
}

fn shuffle(x: &[Activity], y: &[Activity], prefix: &mut Word, out: &mut BTreeSet<Word>) {
    match (x.split_first(), y.split_first()) {
        (None, None) => {
            out.insert(prefix.clone());
        }
        (Some((h, rest)), None) | (None, Some((h, rest))) => {
            let len = prefix.len();
            prefix.push(h.clone());
            prefix.extend(rest.iter().cloned());
            out.insert(prefix.clone());
            prefix.truncate(len);
        }
        (Some((hx, rx)), Some((hy, ry))) => {
            prefix.push(hx.clone());
            shuffle(rx, y, prefix, out);
            prefix.pop();
            prefix.push(hy.clone());
            shuffle(x, ry, prefix, out);
            prefix.pop();
        }
    }
}

fn needs_quotes(name: &str) -> bool {
    name == "tau"
        || Operator::from_keyword(name).is_some()
        || name.trim() != name
        || name
            .chars()
            .any(|c| matches!(c, '(' | ')' | ',' | '"' | '\\'))
}

impl fmt::Display for ProcessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessTree::Tau => f.write_str("tau"),
            ProcessTree::Leaf(a) if needs_quotes(a.name()) => {
                f.write_str("\"")?;
                for c in a.name().chars() {
                    if c == '"' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("\"")
            }
            ProcessTree::Leaf(a) => f.write_str(a.name()),
            ProcessTree::Node(op, l, r) => write!(f, "{}({l},{r})", op.keyword()),
        }
    }
}

impl fmt::Debug for ProcessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from parsing the textual tree notation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse process tree at offset {offset}: {message}")]
pub struct ParseTreeError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for ProcessTree {
    type Err = ParseTreeError;

    /// Parses the prefix notation produced by `Display`, e.g. `seq(A,and(B,C))`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = TreeParser {
            src: s,
            chars: s.char_indices().collect(),
            pos: 0,
        };
        let tree = p.tree()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(tree)
    }
}

struct TreeParser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl TreeParser<'_> {
    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.src.len())
    }

    fn error(&self, message: &str) -> ParseTreeError {
        ParseTreeError {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseTreeError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn tree(&mut self) -> Result<ProcessTree, ParseTreeError> {
        self.skip_ws();
        if self.peek() == Some('"') {
            self.pos += 1;
            let mut name = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quoted name")),
                    Some('"') => {
                        self.pos += 1;
                        break;
                    }
                    Some('\\') => {
                        self.pos += 1;
                        let c = self.peek().ok_or_else(|| self.error("dangling escape"))?;
                        name.push(c);
                        self.pos += 1;
                    }
                    Some(c) => {
                        name.push(c);
                        self.pos += 1;
                    }
                }
            }
            return Activity::try_new(name)
                .map(ProcessTree::Leaf)
                .ok_or_else(|| self.error("empty activity name"));
        }
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| !matches!(c, '(' | ')' | ',' | '"'))
        {
            self.pos += 1;
        }
        let token: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        let token = token.trim();
        self.skip_ws();
        if self.peek() == Some('(') {
            let op = Operator::from_keyword(token)
                .ok_or_else(|| self.error(&format!("unknown operator `{token}`")))?;
            self.pos += 1;
            let left = self.tree()?;
            self.expect(',')?;
            let right = self.tree()?;
            self.expect(')')?;
            return Ok(ProcessTree::node(op, left, right));
        }
        match token {
            "" => Err(self.error("expected a tree")),
            "tau" => Ok(ProcessTree::Tau),
            name => Ok(ProcessTree::leaf(name)),
        }
    }
}
