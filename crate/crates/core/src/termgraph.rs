//! Finitely presented cyclic term graphs.
//!
//! A [`TermGraph`] is a finite set of equations `n = label(down, right)` or
//! `n = leaf(f)`. It denotes a possibly infinite binary tree with finitely
//! many distinct subtrees. Games, strategy profiles and strategies share this
//! representation and differ only in the kind of label carried by inner nodes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::GraphError;

/// An agent (player) name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(name: impl Into<String>) -> Result<Self, GraphError> {
        let name = name.into();
        if name.is_empty() {
            return Err(GraphError::EmptyAgentName);
        }
        Ok(Agent(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `A` and `B`, the two agents of every game in this crate's constructors.
pub fn agent_a() -> Agent {
    Agent("A".to_string())
}

pub fn agent_b() -> Agent {
    Agent("B".to_string())
}

/// A binary move: go down (stop, in comb-shaped games) or right (continue).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Choice {
    D,
    R,
}

impl Choice {
    pub const ALL: [Choice; 2] = [Choice::D, Choice::R];

    pub fn flip(self) -> Choice {
        match self {
            Choice::D => Choice::R,
            Choice::R => Choice::D,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Choice::D => "d",
            Choice::R => "r",
        }
    }

    pub fn from_char(c: char) -> Option<Choice> {
        match c {
            'd' => Some(Choice::D),
            'r' => Some(Choice::R),
            _ => None,
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Exact payoff of every agent at a leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PayoffFn(BTreeMap<Agent, BigRational>);

impl PayoffFn {
    pub fn new(entries: impl IntoIterator<Item = (Agent, BigRational)>) -> Self {
        PayoffFn(entries.into_iter().collect())
    }

    /// Convenience constructor from integer payoffs.
    pub fn from_ints<'a>(entries: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        PayoffFn(
            entries
                .into_iter()
                .map(|(a, v)| (Agent(a.to_string()), BigRational::from_integer(v.into())))
                .collect(),
        )
    }

    pub fn get(&self, agent: &Agent) -> Option<&BigRational> {
        self.0.get(agent)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Agent, &BigRational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest absolute payoff, zero for an empty function.
    pub fn max_abs(&self) -> BigRational {
        self.0
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scaled(&self, factor: &BigRational) -> PayoffFn {
        PayoffFn(self.0.iter().map(|(a, v)| (a.clone(), v * factor)).collect())
    }
}

impl fmt::Display for PayoffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{v}")?;
        }
        f.write_str("}")
    }
}

/// Head of a strategy node: either the agent who owns the position (when the
/// strategy's agent does not play there) or the choice the strategy prescribes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StratHead {
    Agent(Agent),
    Choice(Choice),
}

impl fmt::Display for StratHead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratHead::Agent(a) => write!(f, "{a}"),
            StratHead::Choice(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Game,
    Profile,
    Strategy,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Game => "game",
            Kind::Profile => "profile",
            Kind::Strategy => "strategy",
        })
    }
}

/// Label of a node with two children.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InnerLabel {
    Game(Agent),
    Profile(Agent, Choice),
    Strategy(StratHead),
}

impl InnerLabel {
    pub fn kind(&self) -> Kind {
        match self {
            InnerLabel::Game(_) => Kind::Game,
            InnerLabel::Profile(..) => Kind::Profile,
            InnerLabel::Strategy(_) => Kind::Strategy,
        }
    }

    /// The agent owning the position, when the label names one.
    pub fn owner(&self) -> Option<&Agent> {
        match self {
            InnerLabel::Game(p) | InnerLabel::Profile(p, _) => Some(p),
            InnerLabel::Strategy(StratHead::Agent(p)) => Some(p),
            InnerLabel::Strategy(StratHead::Choice(_)) => None,
        }
    }

    pub fn choice(&self) -> Option<Choice> {
        match self {
            InnerLabel::Profile(_, c) => Some(*c),
            InnerLabel::Strategy(StratHead::Choice(c)) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for InnerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerLabel::Game(p) => write!(f, "{p}"),
            InnerLabel::Profile(p, c) => write!(f, "{p} -> {c}"),
            InnerLabel::Strategy(h) => write!(f, "{h}"),
        }
    }
}

/// Index of an equation inside a [`TermGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef(pub u32);

impl NodeRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> NodeRef {
        NodeRef(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(PayoffFn),
    Inner {
        label: InnerLabel,
        down: NodeRef,
        right: NodeRef,
    },
}

impl Node {
    pub fn inner(label: InnerLabel, down: NodeRef, right: NodeRef) -> Node {
        Node::Inner { label, down, right }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf(_))
    }

    pub fn children(&self) -> Option<(NodeRef, NodeRef)> {
        match self {
            Node::Leaf(_) => None,
            Node::Inner { down, right, .. } => Some((*down, *right)),
        }
    }

    pub fn label(&self) -> Option<&InnerLabel> {
        match self {
            Node::Leaf(_) => None,
            Node::Inner { label, .. } => Some(label),
        }
    }

    pub fn payoff(&self) -> Option<&PayoffFn> {
        match self {
            Node::Leaf(f) => Some(f),
            Node::Inner { .. } => None,
        }
    }

    /// Child selected by a choice.
    pub fn child(&self, c: Choice) -> Option<NodeRef> {
        self.children().map(|(d, r)| match c {
            Choice::D => d,
            Choice::R => r,
        })
    }

    /// Labels compare equal without looking at children.
    pub fn same_label(&self, other: &Node) -> bool {
        match (self, other) {
            (Node::Leaf(f), Node::Leaf(g)) => f == g,
            (Node::Inner { label: a, .. }, Node::Inner { label: b, .. }) => a == b,
            _ => false,
        }
    }
}

/// A validated, immutable equation system.
///
/// Every child reference resolves, every inner label has the graph's kind,
/// every node is reachable from the root, and every leaf assigns a payoff to
/// exactly the graph's agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermGraph {
    kind: Kind,
    agents: BTreeSet<Agent>,
    nodes: Vec<Node>,
    root: NodeRef,
}

impl TermGraph {
    pub fn new(kind: Kind, nodes: Vec<Node>, root: NodeRef) -> Result<Self, GraphError> {
        let n = nodes.len();
        if root.index() >= n {
            return Err(GraphError::DanglingReference(root));
        }
        let mut agents: Option<BTreeSet<Agent>> = None;
        for (i, node) in nodes.iter().enumerate() {
            match node {
                Node::Leaf(f) => {
                    let set: BTreeSet<Agent> = f.agents().cloned().collect();
                    if set.is_empty() {
                        return Err(GraphError::EmptyPayoff(NodeRef::from_index(i)));
                    }
                    match &agents {
                        None => agents = Some(set),
                        Some(expected) if *expected != set => {
                            return Err(GraphError::AgentSetMismatch(NodeRef::from_index(i)));
                        }
                        Some(_) => {}
                    }
                }
                Node::Inner { label, down, right } => {
                    if label.kind() != kind {
                        return Err(GraphError::KindMismatch {
                            node: NodeRef::from_index(i),
                            expected: kind,
                            found: label.kind(),
                        });
                    }
                    for c in [down, right] {
                        if c.index() >= n {
                            return Err(GraphError::DanglingReference(*c));
                        }
                    }
                }
            }
        }
        let owners: BTreeSet<Agent> = nodes
            .iter()
            .filter_map(|node| node.label().and_then(InnerLabel::owner).cloned())
            .collect();
        let Some(agents) = agents else {
            return Err(GraphError::NoLeaf);
        };
        if let Some(stray) = owners.iter().find(|o| !agents.contains(*o)) {
            return Err(GraphError::UnknownAgent(stray.clone()));
        }
        let g = TermGraph {
            kind,
            agents,
            nodes,
            root,
        };
        let seen = g.reach_flags(root);
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GraphError::Unreachable(NodeRef::from_index(i)));
        }
        Ok(g)
    }

    /// Builds a graph from a possibly larger node table, keeping only what is
    /// reachable from `root` and renumbering in depth-first order.
    pub fn from_reachable(kind: Kind, nodes: Vec<Node>, root: NodeRef) -> Result<Self, GraphError> {
        let n = nodes.len();
        if root.index() >= n {
            return Err(GraphError::DanglingReference(root));
        }
        for node in &nodes {
            if let Some((d, r)) = node.children() {
                for c in [d, r] {
                    if c.index() >= n {
                        return Err(GraphError::DanglingReference(c));
                    }
                }
            }
        }
        let order = dfs_order(&nodes, root);
        let mut remap = vec![u32::MAX; n];
        for (new, old) in order.iter().enumerate() {
            remap[old.index()] = new as u32;
        }
        let kept = order
            .iter()
            .map(|old| match &nodes[old.index()] {
                Node::Leaf(f) => Node::Leaf(f.clone()),
                Node::Inner { label, down, right } => Node::Inner {
                    label: label.clone(),
                    down: NodeRef(remap[down.index()]),
                    right: NodeRef(remap[right.index()]),
                },
            })
            .collect();
        TermGraph::new(kind, kept, NodeRef(0))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn agents(&self) -> &BTreeSet<Agent> {
        &self.agents
    }

    pub fn root(&self) -> NodeRef {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_refs(&self) -> impl Iterator<Item = NodeRef> {
        (0..self.nodes.len()).map(NodeRef::from_index)
    }

    pub fn node(&self, n: NodeRef) -> Result<&Node, GraphError> {
        self.nodes.get(n.index()).ok_or(GraphError::DanglingReference(n))
    }

    /// Unchecked access for references obtained from this graph.
    pub fn get(&self, n: NodeRef) -> &Node {
        &self.nodes[n.index()]
    }

    pub fn contains(&self, n: NodeRef) -> bool {
        n.index() < self.nodes.len()
    }

    /// Same equations, different start node.
    pub fn rerooted(&self, n: NodeRef) -> Result<TermGraph, GraphError> {
        self.node(n)?;
        TermGraph::from_reachable(self.kind, self.nodes.clone(), n)
    }

    /// Applies `f` to every inner label, keeping shape, leaves and root.
    pub fn map_labels(
        &self,
        kind: Kind,
        mut f: impl FnMut(NodeRef, &InnerLabel) -> InnerLabel,
    ) -> Result<TermGraph, GraphError> {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| match node {
                Node::Leaf(p) => Node::Leaf(p.clone()),
                Node::Inner { label, down, right } => Node::Inner {
                    label: f(NodeRef::from_index(i), label),
                    down: *down,
                    right: *right,
                },
            })
            .collect();
        TermGraph::new(kind, nodes, self.root)
    }

    /// Applies `f` to every leaf payoff.
    pub fn map_payoffs(&self, mut f: impl FnMut(&PayoffFn) -> PayoffFn) -> Result<TermGraph, GraphError> {
        let nodes = self
            .nodes
            .iter()
            .map(|node| match node {
                Node::Leaf(p) => Node::Leaf(f(p)),
                other => other.clone(),
            })
            .collect();
        TermGraph::new(self.kind, nodes, self.root)
    }

    /// Nodes reachable from `n` (including `n`), in depth-first preorder with
    /// the down child explored before the right child.
    pub fn reachable(&self, n: NodeRef) -> Result<Vec<NodeRef>, GraphError> {
        self.node(n)?;
        Ok(dfs_order(&self.nodes, n))
    }

    fn reach_flags(&self, n: NodeRef) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        for m in dfs_order(&self.nodes, n) {
            seen[m.index()] = true;
        }
        seen
    }

    /// Whether the graph has no cycle, i.e. denotes a finite tree.
    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Nodes ordered so that every node comes after both of its children, or
    /// `None` if the graph is cyclic.
    pub fn topological_order(&self) -> Option<Vec<NodeRef>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack: Vec<(NodeRef, u8)> = vec![(self.root, 0)];
        while let Some((n, phase)) = stack.pop() {
            let i = n.index();
            if phase == 0 {
                match state[i] {
                    2 => continue,
                    1 => return None,
                    _ => {}
                }
                state[i] = 1;
                stack.push((n, 1));
                if let Some((d, r)) = self.nodes[i].children() {
                    for c in [r, d] {
                        match state[c.index()] {
                            1 => return None,
                            0 => stack.push((c, 0)),
                            _ => {}
                        }
                    }
                }
            } else {
                state[i] = 2;
                out.push(n);
            }
        }
        Some(out)
    }

    /// Maximum number of inner nodes on a root-to-leaf path, `None` on cyclic
    /// graphs.
    pub fn height(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut h = vec![0usize; self.nodes.len()];
        for n in order {
            if let Some((d, r)) = self.get(n).children() {
                h[n.index()] = 1 + h[d.index()].max(h[r.index()]);
            }
        }
        Some(h[self.root.index()])
    }

    /// Depth-bounded unfolding from the root.
    pub fn unfold(&self, depth: usize) -> Unfolded {
        self.unfold_at(self.root, depth)
    }

    /// Depth-bounded unfolding from `n`. Depth 0 shows `n` itself with cut
    /// children.
    pub fn unfold_at(&self, n: NodeRef, depth: usize) -> Unfolded {
        match self.get(n) {
            Node::Leaf(f) => Unfolded::Leaf(f.clone()),
            Node::Inner { label, down, right } => {
                let (d, r) = if depth == 0 {
                    (Unfolded::Cut, Unfolded::Cut)
                } else {
                    (self.unfold_at(*down, depth - 1), self.unfold_at(*right, depth - 1))
                };
                Unfolded::Inner {
                    label: label.clone(),
                    down: Box::new(d),
                    right: Box::new(r),
                }
            }
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = &PayoffFn> {
        self.nodes.iter().filter_map(Node::payoff)
    }
}

/// Incremental construction of a node table, with forward references for
/// cyclic equations.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<Option<Node>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A slot to be filled later with [`GraphBuilder::set`].
    pub fn reserve(&mut self) -> NodeRef {
        self.nodes.push(None);
        NodeRef::from_index(self.nodes.len() - 1)
    }

    pub fn set(&mut self, n: NodeRef, node: Node) {
        self.nodes[n.index()] = Some(node);
    }

    pub fn add(&mut self, node: Node) -> NodeRef {
        self.nodes.push(Some(node));
        NodeRef::from_index(self.nodes.len() - 1)
    }

    pub fn leaf(&mut self, f: PayoffFn) -> NodeRef {
        self.add(Node::Leaf(f))
    }

    pub fn inner(&mut self, label: InnerLabel, down: NodeRef, right: NodeRef) -> NodeRef {
        self.add(Node::inner(label, down, right))
    }

    /// Keeps what is reachable from `root`; every reserved slot reached must
    /// have been set.
    pub fn finish(self, kind: Kind, root: NodeRef) -> Result<TermGraph, GraphError> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        let mut unset = Vec::new();
        for (i, n) in self.nodes.into_iter().enumerate() {
            match n {
                Some(n) => nodes.push(n),
                None => {
                    unset.push(NodeRef::from_index(i));
                    // self-loop placeholder; rejected below if reachable
                    nodes.push(Node::Leaf(PayoffFn::default()));
                }
            }
        }
        if root.index() < nodes.len() {
            let reach = dfs_order(&nodes, root);
            if let Some(n) = unset.into_iter().find(|n| reach.contains(n)) {
                return Err(GraphError::DanglingReference(n));
            }
        }
        TermGraph::from_reachable(kind, nodes, root)
    }
}

fn dfs_order(nodes: &[Node], start: NodeRef) -> Vec<NodeRef> {
    let mut seen = vec![false; nodes.len()];
    let mut out = Vec::new();
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        if std::mem::replace(&mut seen[n.index()], true) {
            continue;
        }
        out.push(n);
        if let Some((d, r)) = nodes[n.index()].children() {
            stack.push(r);
            stack.push(d);
        }
    }
    out
}

/// Breadth-first order from the root, down before right.
pub fn bfs_order(g: &TermGraph) -> Vec<NodeRef> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::with_capacity(g.len());
    let mut queue = VecDeque::from([g.root()]);
    seen[g.root().index()] = true;
    while let Some(n) = queue.pop_front() {
        out.push(n);
        if let Some((d, r)) = g.get(n).children() {
            for c in [d, r] {
                if !std::mem::replace(&mut seen[c.index()], true) {
                    queue.push_back(c);
                }
            }
        }
    }
    out
}

/// A finite prefix of the tree denoted by a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unfolded {
    Leaf(PayoffFn),
    Inner {
        label: InnerLabel,
        down: Box<Unfolded>,
        right: Box<Unfolded>,
    },
    /// Subtree beyond the unfolding bound.
    Cut,
}

impl Unfolded {
    /// Number of leaf, inner and cut positions.
    pub fn size(&self) -> usize {
        match self {
            Unfolded::Inner { down, right, .. } => 1 + down.size() + right.size(),
            _ => 1,
        }
    }

    /// ASCII rendering, one position per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, "", None);
        out
    }

    fn render_into(&self, out: &mut String, indent: &str, edge: Option<(Choice, bool)>) {
        let child_indent = match edge {
            None => indent.to_string(),
            Some((c, last)) => {
                out.push_str(indent);
                out.push_str(if last { "`-" } else { "+-" });
                out.push_str(c.token());
                out.push_str("- ");
                format!("{indent}{}", if last { "     " } else { "|    " })
            }
        };
        match self {
            Unfolded::Leaf(f) => {
                out.push_str(&f.to_string());
                out.push('\n');
            }
            Unfolded::Cut => out.push_str("...\n"),
            Unfolded::Inner { label, down, right } => {
                out.push_str(&label.to_string());
                out.push('\n');
                down.render_into(out, &child_indent, Some((Choice::D, false)));
                right.render_into(out, &child_indent, Some((Choice::R, true)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_gg, s_10_a};
    use crate::lab::make_zero_one;

    fn leaf_graph() -> TermGraph {
        TermGraph::new(
            Kind::Game,
            vec![Node::Leaf(PayoffFn::from_ints([("A", 0), ("B", 0)]))],
            NodeRef(0),
        )
        .unwrap()
    }

    #[test]
    fn reachable_leaf_only() {
        let g = leaf_graph();
        assert_eq!(g.reachable(g.root()).unwrap(), vec![NodeRef(0)]);
    }

    #[test]
    fn reachable_zero_one_covers_four_nodes() {
        let g = make_zero_one();
        let r = g.graph().reachable(g.graph().root()).unwrap();
        assert_eq!(r.len(), 4);
        let set: BTreeSet<_> = r.into_iter().collect();
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn reachable_example_gg_has_17_nodes() {
        // 8 inner positions and 9 leaves in the drawing.
        let gg = example_gg();
        assert_eq!(gg.graph().reachable(gg.graph().root()).unwrap().len(), 17);
    }

    #[test]
    fn reachable_dangling() {
        let g = leaf_graph();
        assert!(matches!(g.reachable(NodeRef(3)), Err(GraphError::DanglingReference(_))));
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        let leaf = || Node::Leaf(PayoffFn::from_ints([("A", 0), ("B", 0)]));
        let a = InnerLabel::Game(agent_a());
        let dangling = TermGraph::new(Kind::Game, vec![Node::inner(a.clone(), NodeRef(0), NodeRef(7))], NodeRef(0));
        assert!(matches!(dangling, Err(GraphError::DanglingReference(NodeRef(7)))));

        let unreachable = TermGraph::new(Kind::Game, vec![leaf(), leaf()], NodeRef(0));
        assert!(matches!(unreachable, Err(GraphError::Unreachable(NodeRef(1)))));

        let mixed = TermGraph::new(
            Kind::Game,
            vec![Node::inner(InnerLabel::Profile(agent_a(), Choice::D), NodeRef(1), NodeRef(1)), leaf()],
            NodeRef(0),
        );
        assert!(matches!(mixed, Err(GraphError::KindMismatch { .. })));

        let stray = TermGraph::new(
            Kind::Game,
            vec![Node::inner(InnerLabel::Game(Agent::new("C").unwrap()), NodeRef(1), NodeRef(1)), leaf()],
            NodeRef(0),
        );
        assert!(matches!(stray, Err(GraphError::UnknownAgent(_))));

        let ragged = TermGraph::new(
            Kind::Game,
            vec![
                Node::inner(a, NodeRef(1), NodeRef(2)),
                leaf(),
                Node::Leaf(PayoffFn::from_ints([("A", 0)])),
            ],
            NodeRef(0),
        );
        assert!(matches!(ragged, Err(GraphError::AgentSetMismatch(_))));
    }

    #[test]
    fn unfold_depth_zero_cuts_children() {
        let g = make_zero_one();
        match g.graph().unfold(0) {
            Unfolded::Inner { down, right, .. } => {
                assert_eq!(*down, Unfolded::Cut);
                assert_eq!(*right, Unfolded::Cut);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(leaf_graph().unfold(0), Unfolded::Leaf(_)));
    }

    #[test]
    fn unfold_zero_one_alternates() {
        let g = make_zero_one();
        let mut t = g.graph().unfold(4);
        let f01 = PayoffFn::from_ints([("A", 0), ("B", 1)]);
        let f10 = PayoffFn::from_ints([("A", 1), ("B", 0)]);
        for i in 0..4 {
            let Unfolded::Inner { label, down, right } = t else {
                panic!("spine ended early")
            };
            let (owner, leaf) = if i % 2 == 0 { ("A", &f01) } else { ("B", &f10) };
            assert_eq!(label, InnerLabel::Game(Agent::new(owner).unwrap()));
            assert_eq!(*down, Unfolded::Leaf(leaf.clone()));
            t = *right;
        }
    }

    #[test]
    fn unfold_s10a_depth_two() {
        let s = s_10_a();
        let t = s.graph().unfold(2);
        let Unfolded::Inner { label, down, right } = t else { panic!() };
        assert_eq!(label, InnerLabel::Profile(agent_a(), Choice::R));
        assert_eq!(*down, Unfolded::Leaf(PayoffFn::from_ints([("A", 0), ("B", 1)])));
        let Unfolded::Inner { label, .. } = *right else { panic!() };
        assert_eq!(label, InnerLabel::Profile(agent_b(), Choice::D));
    }

    #[test]
    fn unfold_finite_graph_at_height_is_full_tree() {
        let gg = example_gg();
        let h = gg.graph().height().unwrap();
        assert_eq!(h, 5);
        let full = gg.graph().unfold(h);
        assert_eq!(full.size(), 17);
        assert_eq!(full, gg.graph().unfold(h + 3));
        assert!(!full.render().contains("..."));
    }

    #[test]
    fn acyclicity() {
        assert!(!make_zero_one().graph().is_acyclic());
        assert!(example_gg().graph().is_acyclic());
        assert_eq!(make_zero_one().graph().height(), None);
    }
}
