//! Storage of the nondominated subset of points and line segments in a
//! biobjective (minimization) objective space.
//!
//! [`NdTree`] is a self-balancing binary tree keyed by dominance regions;
//! [`NdList`] is the pairwise-comparison baseline. Both accept the same
//! [`ParetoElement`]s and report the same canonical nondominated set.

pub mod bound_sets;
pub mod generator;
pub mod geometry;
pub mod io;
pub mod list;
pub mod tree;

pub use bound_sets::{
    brute_force_separable, is_separable, separation_margin, theta, BoundSet, BoundSetError,
    LowerBoundCurve,
};
pub use generator::{GeneratorConfig, GeneratorError, GeneratorState};
pub use geometry::{
    canonicalize, clip, compare, dominated_region_contains, region_of, restrict_to_region,
    sets_match, ClipResult, DominanceRelation, ElementKind, GeometryError, ParetoElement, Point,
    RegionId, EPS,
};
pub use list::NdList;
pub use tree::{
    BalanceAudit, InsertReport, NdTree, NodeId, RebalanceMode, RebalancePolicy, RemovalTrace,
    TreeError, TreeStats, Violation,
};

/// Anything that stores a nondominated set.
pub trait NondominatedStore {
    fn insert(&mut self, elem: ParetoElement) -> InsertReport;

    /// Stored elements in canonical order.
    fn nondominated_set(&self) -> Result<Vec<ParetoElement>, GeometryError>;

    /// Number of stored elements (nodes for the tree, items for the list).
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
