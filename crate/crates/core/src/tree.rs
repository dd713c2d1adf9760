//! The nondominated binary tree.
//!
//! Every node holds one [`ParetoElement`]. Its left subtree lies entirely in
//! `R1` of the element and its right subtree entirely in `R4`, so an in-order
//! walk visits the stored set from north-west to south-east. Nodes live in an
//! arena and are addressed by [`NodeId`] handles; replacing a node's payload
//! never touches its links.

use std::fmt;

use arrayvec::ArrayVec;
use thiserror::Error;

use crate::geometry::{
    clip_parts, dominated_region_contains, may_clip, ordered_pair_ok, restrict_to_region, GeometryError,
    ParetoElement, Point, RegionId, EPS,
};
use crate::NondominatedStore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("balance parameter delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("rebalance trigger must be positive")]
    InvalidTrigger,
    #[error("node {0:?} is not in the tree")]
    NodeNotInTree(NodeId),
}

/// When the balance criterion is enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RebalanceMode {
    /// Never.
    A0,
    /// Whole tree, before every insertion at the root.
    A1,
    /// Whole tree, periodically as the node count grows.
    A2,
    /// At each node an insertion passes through.
    A3,
    /// A3 plus a sparser A2.
    A4,
}

impl RebalanceMode {
    pub const ALL: [RebalanceMode; 5] = [
        RebalanceMode::A0,
        RebalanceMode::A1,
        RebalanceMode::A2,
        RebalanceMode::A3,
        RebalanceMode::A4,
    ];

    fn periodic(self) -> bool {
        matches!(self, RebalanceMode::A2 | RebalanceMode::A4)
    }

    fn on_visit(self) -> bool {
        matches!(self, RebalanceMode::A3 | RebalanceMode::A4)
    }

    pub fn name(self) -> &'static str {
        match self {
            RebalanceMode::A0 => "a0",
            RebalanceMode::A1 => "a1",
            RebalanceMode::A2 => "a2",
            RebalanceMode::A3 => "a3",
            RebalanceMode::A4 => "a4",
        }
    }
}

impl fmt::Display for RebalanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RebalanceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a0" => Ok(RebalanceMode::A0),
            "a1" => Ok(RebalanceMode::A1),
            "a2" => Ok(RebalanceMode::A2),
            "a3" => Ok(RebalanceMode::A3),
            "a4" => Ok(RebalanceMode::A4),
            other => Err(format!("unknown rebalance policy {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RebalancePolicy {
    pub mode: RebalanceMode,
    /// Children may hold at most `size / (2 - delta)` nodes.
    pub delta: f64,
    /// Node count of the first periodic rebalance (A2/A4).
    pub initial_trigger: usize,
    /// Later periodic rebalances fire once the node count reaches
    /// `growth_ratio` times the count at the previous one.
    pub growth_ratio: f64,
}

impl RebalancePolicy {
    pub const DEFAULT_DELTA: f64 = 0.3;

    pub fn new(mode: RebalanceMode) -> Self {
        let growth_ratio = match mode {
            RebalanceMode::A4 => 8.0,
            _ => 1.01,
        };
        RebalancePolicy {
            mode,
            delta: Self::DEFAULT_DELTA,
            initial_trigger: 100,
            growth_ratio,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self, TreeError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(TreeError::InvalidDelta(delta));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn with_triggers(mut self, initial: usize, growth_ratio: f64) -> Result<Self, TreeError> {
        if initial == 0 || !(growth_ratio > 0.0) {
            return Err(TreeError::InvalidTrigger);
        }
        self.initial_trigger = initial;
        self.growth_ratio = growth_ratio;
        Ok(self)
    }

    /// Largest child size allowed under a node whose subtree holds `size`.
    pub fn max_child(&self, size: usize) -> usize {
        (size as f64 / (2.0 - self.delta)).floor() as usize
    }
}

impl Default for RebalancePolicy {
    fn default() -> Self {
        Self::new(RebalanceMode::A0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InsertReport {
    pub added_any: bool,
    pub pieces_added: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub node_count: usize,
    /// Nodes on the longest root-to-leaf path.
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SizeMismatch { node: NodeId, stored: usize, actual: usize },
    ParentLink { node: NodeId },
    NodeCount { stored: usize, actual: usize },
    /// `node` sits in the subtree of `ancestor` but outside the matching region.
    RegionOrder { ancestor: NodeId, node: NodeId },
    IdealMismatch { node: NodeId },
    DominatedPair { first: NodeId, second: NodeId },
}

/// One instrumented removal: nodes visited and the tree depth just before.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemovalTrace {
    pub visits: usize,
    pub depth_before: usize,
}

/// Balance check results collected after each rebalance triggered at the
/// root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BalanceAudit {
    pub rebalances: usize,
    pub violating_nodes: usize,
}

#[derive(Clone, Debug)]
struct Node {
    elem: ParetoElement,
    parent: Option<NodeId>,
    left: Option<NodeId>,
    right: Option<NodeId>,
    size: usize,
    ideal_left: Option<Point>,
    ideal_right: Option<Point>,
    live: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Root,
    Left(NodeId),
    Right(NodeId),
}

#[derive(Clone, Debug)]
pub struct NdTree {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    root: Option<NodeId>,
    policy: RebalancePolicy,
    prune_subtrees: bool,
    node_count: usize,
    insert_count: usize,
    last_periodic: Option<usize>,
    removal_probe: Option<Vec<RemovalTrace>>,
    balance_audit: Option<BalanceAudit>,
}

impl Default for NdTree {
    fn default() -> Self {
        Self::new(RebalancePolicy::default())
    }
}

impl NdTree {
    pub fn new(policy: RebalancePolicy) -> Self {
        NdTree {
            nodes: Vec::new(),
            free: Vec::new(),
            root: None,
            policy,
            prune_subtrees: false,
            node_count: 0,
            insert_count: 0,
            last_periodic: None,
            removal_probe: None,
            balance_audit: None,
        }
    }

    /// Enables the ideal-point check that drops whole dominated subtrees.
    /// Ideal points are only maintained while this is on.
    pub fn with_subtree_pruning(mut self, enabled: bool) -> Self {
        assert!(self.root.is_none(), "pruning must be chosen on an empty tree");
        self.prune_subtrees = enabled;
        self
    }

    pub fn policy(&self) -> &RebalancePolicy {
        &self.policy
    }

    pub fn subtree_pruning(&self) -> bool {
        self.prune_subtrees
    }

    pub fn insert_count(&self) -> usize {
        self.insert_count
    }

    /// Records a [`RemovalTrace`] for every subsequent node removal.
    pub fn enable_removal_probe(&mut self) {
        self.removal_probe = Some(Vec::new());
    }

    pub fn removal_traces(&self) -> &[RemovalTrace] {
        self.removal_probe.as_deref().unwrap_or(&[])
    }

    /// Checks every node after each rebalance fired at the root (A1).
    pub fn enable_balance_audit(&mut self) {
        self.balance_audit = Some(BalanceAudit::default());
    }

    pub fn balance_audit(&self) -> Option<BalanceAudit> {
        self.balance_audit
    }

    pub fn root(&self) -> Option<NodeId> {
        self.root
    }

    pub fn element(&self, id: NodeId) -> ParetoElement {
        self.nodes[id.idx()].elem
    }

    pub fn left(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.idx()].left
    }

    pub fn right(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.idx()].right
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.idx()].parent
    }

    pub fn size(&self, id: NodeId) -> usize {
        self.nodes[id.idx()].size
    }

    pub fn ideal_points(&self, id: NodeId) -> (Option<Point>, Option<Point>) {
        let n = &self.nodes[id.idx()];
        (n.ideal_left, n.ideal_right)
    }

    fn contains(&self, id: NodeId) -> bool {
        self.nodes.get(id.idx()).is_some_and(|n| n.live)
    }

    fn size_of(&self, id: Option<NodeId>) -> usize {
        id.map_or(0, |i| self.nodes[i.idx()].size)
    }

    fn at(&self, slot: Slot) -> Option<NodeId> {
        match slot {
            Slot::Root => self.root,
            Slot::Left(p) => self.nodes[p.idx()].left,
            Slot::Right(p) => self.nodes[p.idx()].right,
        }
    }

    fn set_slot(&mut self, slot: Slot, id: Option<NodeId>) {
        match slot {
            Slot::Root => self.root = id,
            Slot::Left(p) => self.nodes[p.idx()].left = id,
            Slot::Right(p) => self.nodes[p.idx()].right = id,
        }
        if let Some(i) = id {
            self.nodes[i.idx()].parent = match slot {
                Slot::Root => None,
                Slot::Left(p) | Slot::Right(p) => Some(p),
            };
        }
    }

    fn slot_of(&self, id: NodeId) -> Slot {
        match self.nodes[id.idx()].parent {
            None => Slot::Root,
            Some(p) if self.nodes[p.idx()].left == Some(id) => Slot::Left(p),
            Some(p) => Slot::Right(p),
        }
    }

    fn alloc(&mut self, elem: ParetoElement) -> NodeId {
        let node = Node {
            elem,
            parent: None,
            left: None,
            right: None,
            size: 1,
            ideal_left: None,
            ideal_right: None,
            live: true,
        };
        if let Some(id) = self.free.pop() {
            self.nodes[id.idx()] = node;
            id
        } else {
            self.nodes.push(node);
            NodeId((self.nodes.len() - 1) as u32)
        }
    }

    fn release(&mut self, id: NodeId) {
        let n = &mut self.nodes[id.idx()];
        n.live = false;
        n.parent = None;
        n.left = None;
        n.right = None;
        self.free.push(id);
    }

    /// Recomputes size and ideal points of `id` from its children.
    fn refresh(&mut self, id: NodeId) {
        let (l, r) = (self.nodes[id.idx()].left, self.nodes[id.idx()].right);
        let size = 1 + self.size_of(l) + self.size_of(r);
        let ideals = self.prune_subtrees.then(|| {
            let e = self.nodes[id.idx()].elem;
            let nw_x = l.map_or(e.x1(), |l| {
                self.nodes[l.idx()]
                    .ideal_left
                    .map_or(e.x1(), |p| p.x)
            });
            let se_y = r.map_or(e.y2(), |r| {
                self.nodes[r.idx()]
                    .ideal_right
                    .map_or(e.y2(), |p| p.y)
            });
            (Point::new(nw_x, e.y1()), Point::new(e.x2(), se_y))
        });
        let n = &mut self.nodes[id.idx()];
        n.size = size;
        n.ideal_left = ideals.map(|i| i.0);
        n.ideal_right = ideals.map(|i| i.1);
    }

    /// Refreshes from `from` upward, through `stop` inclusive (root if `None`).
    fn update(&mut self, from: Option<NodeId>, stop: Option<NodeId>) {
        let mut cur = from;
        while let Some(id) = cur {
            self.refresh(id);
            if Some(id) == stop {
                break;
            }
            cur = self.nodes[id.idx()].parent;
        }
    }

    fn attach(&mut self, slot: Slot, elem: ParetoElement) -> NodeId {
        debug_assert!(self.at(slot).is_none());
        let id = self.alloc(elem);
        self.set_slot(slot, Some(id));
        self.node_count += 1;
        self.update(Some(id), None);
        id
    }

    /// Swaps the payload only.
    fn replace(&mut self, id: NodeId, elem: ParetoElement) {
        self.nodes[id.idx()].elem = elem;
        if self.prune_subtrees {
            self.update(Some(id), None);
        }
    }

    fn leftmost(&self, mut id: NodeId, visits: &mut usize) -> NodeId {
        *visits += 1;
        while let Some(l) = self.nodes[id.idx()].left {
            id = l;
            *visits += 1;
        }
        id
    }

    fn rightmost(&self, mut id: NodeId, visits: &mut usize) -> NodeId {
        *visits += 1;
        while let Some(r) = self.nodes[id.idx()].right {
            id = r;
            *visits += 1;
        }
        id
    }

    // ------------------------------------------------------------------
    // insertion
    // ------------------------------------------------------------------

    /// Inserts `elem`, keeping exactly its parts not dominated by the current
    /// contents and removing every stored part it dominates.
    pub fn insert(&mut self, elem: ParetoElement) -> InsertReport {
        self.insert_count += 1;
        self.periodic_rebalance();

        let mut report = InsertReport::default();
        // depth-first, left before right
        let mut pending = vec![(elem, Slot::Root)];
        while let Some((piece, slot)) = pending.pop() {
            if slot == Slot::Root && self.root.is_some() && self.policy.mode == RebalanceMode::A1 {
                self.rebalance_full();
                if self.balance_audit.is_some() {
                    let bad = self.unbalanced_nodes().len();
                    let audit = self.balance_audit.as_mut().expect("checked above");
                    audit.rebalances += 1;
                    audit.violating_nodes += bad;
                }
            }
            let Some(mut id) = self.at(slot) else {
                self.attach(slot, piece);
                report.pieces_added += 1;
                continue;
            };
            if self.policy.mode.on_visit() && self.nodes[id.idx()].size > 2 && self.balance_at(id) {
                id = self.at(slot).expect("rebalancing keeps the slot occupied");
            }

            let stored = self.nodes[id.idx()].elem;
            if !may_clip(&piece, &stored) && !may_clip(&stored, &piece) {
                // boxes apart: the piece lies wholly up-left or down-right
                let side = if stored.x1() > piece.x2() { Slot::Left(id) } else { Slot::Right(id) };
                pending.push((piece, side));
                continue;
            }
            // the stored element wins ties, so only what survives it may
            // cut into it
            let survivors = clip_parts(&piece, &stored);
            if survivors.is_empty() {
                continue;
            }
            let mut remaining: ArrayVec<ParetoElement, 4> = ArrayVec::new();
            remaining.push(stored);
            for s in &survivors {
                if !remaining.iter().any(|r| may_clip(r, s)) {
                    continue;
                }
                let before = std::mem::take(&mut remaining);
                remaining.extend(before.iter().flat_map(|r| clip_parts(r, s)));
            }
            if remaining.is_empty() {
                if self.prune_subtrees {
                    self.prune_dominated_children(id, &survivors);
                }
                self.remove_at(id);
                pending.extend(survivors.into_iter().rev().map(|s| (s, slot)));
                continue;
            }
            if remaining.len() > 1 {
                self.split(id, &remaining);
            } else if remaining[0] != stored {
                self.replace(id, remaining[0]);
            }

            let base = self.nodes[id.idx()].elem;
            for s in &survivors {
                if let Some(r4) = restrict_to_region(s, &base, RegionId::R4) {
                    pending.push((r4, Slot::Right(id)));
                }
            }
            for s in survivors.iter().rev() {
                if let Some(r1) = restrict_to_region(s, &base, RegionId::R1) {
                    pending.push((r1, Slot::Left(id)));
                }
            }
        }
        report.added_any = report.pieces_added > 0;
        report
    }

    /// The node keeps `parts[0]` and its left subtree; the remaining parts
    /// hang off it as a chain of right children, the last of which inherits
    /// the old right subtree.
    fn split(&mut self, id: NodeId, parts: &[ParetoElement]) {
        let old_right = self.nodes[id.idx()].right;
        self.nodes[id.idx()].elem = parts[0];
        self.set_slot(Slot::Right(id), None);
        let mut last = id;
        for &part in &parts[1..] {
            let n = self.alloc(part);
            self.set_slot(Slot::Right(last), Some(n));
            self.node_count += 1;
            last = n;
        }
        if let Some(r) = old_right {
            self.set_slot(Slot::Right(last), Some(r));
        }
        self.update(Some(last), None);
    }

    fn prune_dominated_children(&mut self, id: NodeId, dominators: &[ParetoElement]) {
        let covered = |p: Point| dominators.iter().any(|d| dominated_region_contains(d, p));
        let n = &self.nodes[id.idx()];
        let (l, r) = (n.left, n.right);
        let (il, ir) = (n.ideal_left, n.ideal_right);
        if let (Some(l), Some(p)) = (l, il) {
            if covered(p) {
                self.drop_subtree(l);
            }
        }
        if let (Some(r), Some(p)) = (r, ir) {
            if covered(p) {
                self.drop_subtree(r);
            }
        }
    }

    fn drop_subtree(&mut self, id: NodeId) {
        let slot = self.slot_of(id);
        let parent = self.nodes[id.idx()].parent;
        self.set_slot(slot, None);
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            stack.extend(self.nodes[n.idx()].left);
            stack.extend(self.nodes[n.idx()].right);
            self.release(n);
            self.node_count -= 1;
        }
        self.update(parent, None);
    }

    // ------------------------------------------------------------------
    // removal
    // ------------------------------------------------------------------

    /// Removes the element stored at `id`, pulling a replacement from the
    /// larger child subtree along a single downward path.
    pub fn remove_node(&mut self, id: NodeId) -> Result<(), TreeError> {
        if !self.contains(id) {
            return Err(TreeError::NodeNotInTree(id));
        }
        self.remove_at(id);
        Ok(())
    }

    fn remove_at(&mut self, id: NodeId) -> usize {
        let depth_before = self.removal_probe.is_some().then(|| self.depth());
        let mut visits = 1;
        let mut cur = id;
        loop {
            let (l, r) = (self.nodes[cur.idx()].left, self.nodes[cur.idx()].right);
            let next = match (l, r) {
                (None, None) => break,
                _ if self.size_of(l) > self.size_of(r) => {
                    self.rightmost(l.expect("larger side is non-empty"), &mut visits)
                }
                _ => self.leftmost(r.expect("right side is non-empty"), &mut visits),
            };
            self.nodes[cur.idx()].elem = self.nodes[next.idx()].elem;
            cur = next;
        }
        let parent = self.nodes[cur.idx()].parent;
        let slot = self.slot_of(cur);
        self.set_slot(slot, None);
        self.release(cur);
        self.node_count -= 1;
        self.update(parent, None);
        if let (Some(trace), Some(depth_before)) = (self.removal_probe.as_mut(), depth_before) {
            trace.push(RemovalTrace {
                visits,
                depth_before,
            });
        }
        visits
    }

    // ------------------------------------------------------------------
    // rebalancing
    // ------------------------------------------------------------------

    fn periodic_rebalance(&mut self) {
        if !self.policy.mode.periodic() || self.node_count == 0 {
            return;
        }
        let threshold = match self.last_periodic {
            None => self.policy.initial_trigger as f64,
            Some(last) => self.policy.growth_ratio * last as f64,
        };
        if self.node_count as f64 >= threshold {
            self.rebalance_full();
            self.last_periodic = Some(self.node_count);
        }
    }

    /// Establishes the balance criterion at every node holding more than two.
    pub fn rebalance_full(&mut self) {
        if self.root.is_some() {
            self.rebalance_slot(Slot::Root);
        }
    }

    fn rebalance_slot(&mut self, slot: Slot) {
        let Some(n) = self.at(slot) else { return };
        self.rebalance_children(n);
        if self.balance_at(n) {
            // the moves may have unbalanced the rearranged children; their
            // sizes, and hence the criterion here, are not affected
            let top = self.at(slot).expect("slot stays occupied");
            self.rebalance_children(top);
        }
    }

    fn rebalance_children(&mut self, n: NodeId) {
        if self.size_of(self.nodes[n.idx()].left) > 2 {
            self.rebalance_slot(Slot::Left(n));
        }
        if self.size_of(self.nodes[n.idx()].right) > 2 {
            self.rebalance_slot(Slot::Right(n));
        }
    }

    /// The criterion check at one node. Returns whether anything moved; a
    /// rotation changes which node occupies `n`'s slot.
    fn balance_at(&mut self, n: NodeId) -> bool {
        let delta = self.policy.delta;
        let size = self.nodes[n.idx()].size;
        let limit = self.policy.max_child(size);
        let (l, r) = (self.nodes[n.idx()].left, self.nodes[n.idx()].right);
        // inner-grandchild threshold for moving a whole subtree at once
        let bulk = (1.0 - delta) * size as f64 / (2.0 - delta) - 1.0;
        if self.size_of(l) > limit {
            let ll = self.size_of(l.and_then(|l| self.nodes[l.idx()].left));
            if ll as f64 >= bulk {
                self.rotate_right(n);
            } else {
                while self.size_of(self.nodes[n.idx()].left) > limit {
                    self.shift_right(n);
                }
            }
            true
        } else if self.size_of(r) > limit {
            let rr = self.size_of(r.and_then(|r| self.nodes[r.idx()].right));
            if rr as f64 >= bulk {
                self.rotate_left(n);
            } else {
                while self.size_of(self.nodes[n.idx()].right) > limit {
                    self.shift_left(n);
                }
            }
            true
        } else {
            false
        }
    }

    /// The right child takes `n`'s place; `n` becomes its left child and
    /// adopts the right child's old left subtree.
    fn rotate_left(&mut self, n: NodeId) {
        let slot = self.slot_of(n);
        let r = self.nodes[n.idx()].right.expect("rotate_left needs a right child");
        let rl = self.nodes[r.idx()].left;
        self.nodes[n.idx()].right = rl;
        if let Some(rl) = rl {
            self.nodes[rl.idx()].parent = Some(n);
        }
        self.set_slot(slot, Some(r));
        self.set_slot(Slot::Left(r), Some(n));
        self.refresh(n);
        self.refresh(r);
    }

    fn rotate_right(&mut self, n: NodeId) {
        let slot = self.slot_of(n);
        let l = self.nodes[n.idx()].left.expect("rotate_right needs a left child");
        let lr = self.nodes[l.idx()].right;
        self.nodes[n.idx()].left = lr;
        if let Some(lr) = lr {
            self.nodes[lr.idx()].parent = Some(n);
        }
        self.set_slot(slot, Some(l));
        self.set_slot(Slot::Right(l), Some(n));
        self.refresh(n);
        self.refresh(l);
    }

    /// Moves one element from the right subtree to the left: the leftmost
    /// element on the right replaces `n`'s, which is appended as the
    /// rightmost node on the left.
    fn shift_left(&mut self, n: NodeId) {
        let r = self.nodes[n.idx()].right.expect("shift_left needs a right child");
        let mut visits = 0;
        let m = self.leftmost(r, &mut visits);
        let moved = self.nodes[n.idx()].elem;
        self.nodes[n.idx()].elem = self.nodes[m.idx()].elem;
        self.detach_reuse(m, n);
        self.nodes[m.idx()].elem = moved;
        let dest = match self.nodes[n.idx()].left {
            None => Slot::Left(n),
            Some(l) => Slot::Right(self.rightmost(l, &mut visits)),
        };
        self.set_slot(dest, Some(m));
        self.update(Some(m), Some(n));
    }

    fn shift_right(&mut self, n: NodeId) {
        let l = self.nodes[n.idx()].left.expect("shift_right needs a left child");
        let mut visits = 0;
        let m = self.rightmost(l, &mut visits);
        let moved = self.nodes[n.idx()].elem;
        self.nodes[n.idx()].elem = self.nodes[m.idx()].elem;
        self.detach_reuse(m, n);
        self.nodes[m.idx()].elem = moved;
        let dest = match self.nodes[n.idx()].right {
            None => Slot::Right(n),
            Some(r) => Slot::Left(self.leftmost(r, &mut visits)),
        };
        self.set_slot(dest, Some(m));
        self.update(Some(m), Some(n));
    }

    /// Unlinks `m` (which has at most one child), splicing that child into
    /// its place, and leaves `m` as a detached leaf ready for reuse.
    fn detach_reuse(&mut self, m: NodeId, stop: NodeId) {
        let node = &self.nodes[m.idx()];
        let child = node.left.or(node.right);
        debug_assert!(node.left.is_none() || node.right.is_none());
        let parent = node.parent;
        let slot = self.slot_of(m);
        self.set_slot(slot, child);
        let node = &mut self.nodes[m.idx()];
        node.left = None;
        node.right = None;
        node.parent = None;
        node.size = 1;
        self.update(parent, Some(stop));
    }

    // ------------------------------------------------------------------
    // queries
    // ------------------------------------------------------------------

    /// Stored elements in in-order (north-west to south-east).
    pub fn elements_in_order(&self) -> Vec<ParetoElement> {
        self.ids_in_order()
            .into_iter()
            .map(|id| self.nodes[id.idx()].elem)
            .collect()
    }

    fn ids_in_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.node_count);
        let mut stack = Vec::new();
        let mut cur = self.root;
        while cur.is_some() || !stack.is_empty() {
            while let Some(id) = cur {
                stack.push(id);
                cur = self.nodes[id.idx()].left;
            }
            let id = stack.pop().expect("stack is non-empty");
            out.push(id);
            cur = self.nodes[id.idx()].right;
        }
        out
    }

    pub fn nondominated_set(&self) -> Result<Vec<ParetoElement>, GeometryError> {
        crate::geometry::canonicalize(self.elements_in_order())
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack: Vec<(NodeId, usize)> = self.root.map(|r| (r, 1)).into_iter().collect();
        while let Some((id, d)) = stack.pop() {
            best = best.max(d);
            let n = &self.nodes[id.idx()];
            stack.extend(n.left.map(|c| (c, d + 1)));
            stack.extend(n.right.map(|c| (c, d + 1)));
        }
        best
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            node_count: self.node_count,
            depth: self.depth(),
        }
    }

    pub fn len(&self) -> usize {
        self.node_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_count == 0
    }

    /// Nodes (size > 2) violating the balance criterion.
    pub fn unbalanced_nodes(&self) -> Vec<NodeId> {
        self.ids_in_order()
            .into_iter()
            .filter(|&id| {
                let n = &self.nodes[id.idx()];
                n.size > 2
                    && self.size_of(n.left).max(self.size_of(n.right))
                        > self.policy.max_child(n.size)
            })
            .collect()
    }

    /// Structural self-check; an empty result means the tree is healthy.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let ids = self.ids_in_order();
        if ids.len() != self.node_count {
            out.push(Violation::NodeCount {
                stored: self.node_count,
                actual: ids.len(),
            });
        }
        if let Some(r) = self.root {
            if self.nodes[r.idx()].parent.is_some() {
                out.push(Violation::ParentLink { node: r });
            }
        }
        for &id in &ids {
            let n = &self.nodes[id.idx()];
            for child in [n.left, n.right].into_iter().flatten() {
                if self.nodes[child.idx()].parent != Some(id) {
                    out.push(Violation::ParentLink { node: child });
                }
            }
            let actual = 1 + self.size_of(n.left) + self.size_of(n.right);
            if n.size != actual {
                out.push(Violation::SizeMismatch {
                    node: id,
                    stored: n.size,
                    actual,
                });
            }
            if self.prune_subtrees {
                let nw_x = n.left.map_or(n.elem.x1(), |l| {
                    self.nodes[self.leftmost(l, &mut 0).idx()].elem.x1()
                });
                let se_y = n.right.map_or(n.elem.y2(), |r| {
                    self.nodes[self.rightmost(r, &mut 0).idx()].elem.y2()
                });
                let want = (
                    Some(Point::new(nw_x, n.elem.y1())),
                    Some(Point::new(n.elem.x2(), se_y)),
                );
                if (n.ideal_left, n.ideal_right) != want {
                    out.push(Violation::IdealMismatch { node: id });
                }
            }
            // every ancestor must see this node in its R1 (left) or R4 (right)
            let mut child = id;
            let mut anc = n.parent;
            while let Some(a) = anc {
                let an = &self.nodes[a.idx()];
                let e = &n.elem;
                let ok = if an.left == Some(child) {
                    e.x2() <= an.elem.x1() + EPS && e.y2() >= an.elem.y1() - EPS
                } else {
                    e.x1() >= an.elem.x2() - EPS && e.y1() <= an.elem.y2() + EPS
                };
                if !ok {
                    out.push(Violation::RegionOrder {
                        ancestor: a,
                        node: id,
                    });
                }
                child = a;
                anc = an.parent;
            }
        }
        for w in ids.windows(2) {
            let (a, b) = (&self.nodes[w[0].idx()].elem, &self.nodes[w[1].idx()].elem);
            if !ordered_pair_ok(a, b) {
                out.push(Violation::DominatedPair {
                    first: w[0],
                    second: w[1],
                });
            }
        }
        out
    }
}

impl NondominatedStore for NdTree {
    fn insert(&mut self, elem: ParetoElement) -> InsertReport {
        NdTree::insert(self, elem)
    }

    fn nondominated_set(&self) -> Result<Vec<ParetoElement>, GeometryError> {
        NdTree::nondominated_set(self)
    }

    fn len(&self) -> usize {
        self.node_count
    }
}
