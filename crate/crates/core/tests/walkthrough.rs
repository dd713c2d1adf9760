//! Small hand-worked example: five staircase fragments inserted in a fixed
//! order, checked against hand-derived trees and the final stored set.

use ndtree::{
    sets_match, NdList, NdTree, NodeId, ParetoElement, Point, RebalanceMode, RebalancePolicy,
};

fn pt(x: f64, y: f64) -> ParetoElement {
    ParetoElement::point(x, y)
}

fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> ParetoElement {
    ParetoElement::segment(Point::new(x1, y1), Point::new(x2, y2)).unwrap()
}

fn upper_right() -> Vec<ParetoElement> {
    vec![seg(6.0, 16.0, 7.0, 10.0), seg(7.0, 10.0, 10.0, 5.0), seg(10.0, 5.0, 11.0, 4.0)]
}

fn lone_point() -> Vec<ParetoElement> {
    vec![pt(5.0, 11.0)]
}

fn upper_left() -> Vec<ParetoElement> {
    vec![seg(1.0, 17.0, 2.0, 15.0), seg(2.0, 15.0, 4.0, 14.0), seg(4.0, 14.0, 9.0, 13.0)]
}

fn lower_right() -> Vec<ParetoElement> {
    vec![seg(8.0, 7.0, 14.0, 3.0), seg(14.0, 3.0, 17.0, 2.0)]
}

fn dominated_point() -> Vec<ParetoElement> {
    vec![pt(1.0, 19.0)]
}

fn expected_final() -> Vec<ParetoElement> {
    vec![
        seg(1.0, 17.0, 2.0, 15.0),
        seg(2.0, 15.0, 4.0, 14.0),
        seg(4.0, 14.0, 5.0, 13.8),
        pt(5.0, 11.0),
        seg(41.0 / 6.0, 11.0, 7.0, 10.0),
        seg(7.0, 10.0, 8.0, 25.0 / 3.0),
        seg(8.0, 7.0, 28.0 / 3.0, 55.0 / 9.0),
        seg(28.0 / 3.0, 55.0 / 9.0, 10.0, 5.0),
        seg(10.0, 5.0, 11.0, 4.0),
        seg(12.5, 4.0, 14.0, 3.0),
        seg(14.0, 3.0, 17.0, 2.0),
    ]
}

fn all_sets() -> Vec<Vec<ParetoElement>> {
    vec![upper_right(), lone_point(), upper_left(), lower_right(), dominated_point()]
}

/// Tree shape as nested (element, left, right); `None` for an empty slot.
#[derive(Debug)]
enum Shape {
    Leaf,
    Node(ParetoElement, Box<Shape>, Box<Shape>),
}

fn node(e: ParetoElement, l: Shape, r: Shape) -> Shape {
    Shape::Node(e, Box::new(l), Box::new(r))
}

fn leaf(e: ParetoElement) -> Shape {
    node(e, Shape::Leaf, Shape::Leaf)
}

fn matches(tree: &NdTree, id: Option<NodeId>, want: &Shape) -> bool {
    match (id, want) {
        (None, Shape::Leaf) => true,
        (Some(i), Shape::Node(e, l, r)) => {
            sets_match(&[tree.element(i)], &[*e], 1e-9)
                && matches(tree, tree.left(i), l)
                && matches(tree, tree.right(i), r)
        }
        _ => false,
    }
}

#[test]
fn final_set_is_policy_independent() {
    for mode in RebalanceMode::ALL {
        for prune in [false, true] {
            let mut tree = NdTree::new(RebalancePolicy::new(mode)).with_subtree_pruning(prune);
            for e in all_sets().into_iter().flatten() {
                tree.insert(e);
                assert!(tree.validate().is_empty(), "{mode:?}: {:?}", tree.validate());
            }
            let got = tree.nondominated_set().unwrap();
            assert!(sets_match(&got, &expected_final(), 1e-9), "{mode:?} prune={prune}: {got:#?}");
        }
    }
}

#[test]
fn list_agrees_on_final_set() {
    let mut list = NdList::new();
    for e in all_sets().into_iter().flatten() {
        list.insert(e);
    }
    assert!(sets_match(&list.nondominated_set().unwrap(), &expected_final(), 1e-9));
}

#[test]
fn unbalanced_shapes_follow_insertion_routing() {
    let mut tree = NdTree::new(RebalancePolicy::new(RebalanceMode::A0));
    for e in upper_right().into_iter().chain(lone_point()) {
        tree.insert(e);
    }
    let after_point = node(
        seg(41.0 / 6.0, 11.0, 7.0, 10.0),
        leaf(pt(5.0, 11.0)),
        node(seg(7.0, 10.0, 10.0, 5.0), Shape::Leaf, leaf(seg(10.0, 5.0, 11.0, 4.0))),
    );
    assert!(matches(&tree, tree.root(), &after_point));
    assert_eq!(tree.stats().depth, 3);

    for e in upper_left() {
        tree.insert(e);
    }
    // the left subtree is now a chain hanging off the point
    let root = tree.root().unwrap();
    let left = tree.left(root).unwrap();
    assert_eq!(tree.element(left), pt(5.0, 11.0));
    assert_eq!(tree.size(left), 4);
    tree.rebalance_full();
    assert!(tree.unbalanced_nodes().is_empty());
    // the right side was within bounds and stays put
    let right = tree.right(tree.root().unwrap()).unwrap();
    assert_eq!(tree.element(right), seg(7.0, 10.0, 10.0, 5.0));

    tree.insert(seg(8.0, 7.0, 14.0, 3.0));
    let right_side = node(
        seg(7.0, 10.0, 8.0, 25.0 / 3.0),
        Shape::Leaf,
        node(
            seg(28.0 / 3.0, 55.0 / 9.0, 10.0, 5.0),
            leaf(seg(8.0, 7.0, 28.0 / 3.0, 55.0 / 9.0)),
            node(seg(10.0, 5.0, 11.0, 4.0), Shape::Leaf, leaf(seg(12.5, 4.0, 14.0, 3.0))),
        ),
    );
    let root = tree.root().unwrap();
    assert!(matches(&tree, tree.right(root), &right_side));
    assert!(tree.validate().is_empty());
}

#[test]
fn root_rebalancing_keeps_every_node_within_bounds() {
    let mut tree = NdTree::new(RebalancePolicy::new(RebalanceMode::A1));
    for e in all_sets().into_iter().flatten() {
        tree.insert(e);
        // the next root insertion rebalances first
        let mut probe = tree.clone();
        probe.rebalance_full();
        assert!(probe.unbalanced_nodes().is_empty());
        assert_eq!(probe.elements_in_order(), tree.elements_in_order());
    }
}
