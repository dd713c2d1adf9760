use ndtree::{
    canonicalize, sets_match, GeneratorConfig, GeneratorState, NdList, NdTree, ParetoElement,
    Point, RebalanceMode, RebalancePolicy,
};
use proptest::prelude::*;

/// Elements on a coarse grid so that shared endpoints and ties are common.
fn grid_element() -> impl Strategy<Value = ParetoElement> {
    (0u8..24, 0u8..24, 0u8..6, 0u8..6, any::<bool>()).prop_map(|(x, y, dx, dy, is_pt)| {
        let (x, y) = (x as f64 / 2.0, y as f64 / 2.0);
        if is_pt || dx == 0 || dy == 0 {
            ParetoElement::point(x, y)
        } else {
            ParetoElement::segment(
                Point::new(x, y + dy as f64 / 2.0),
                Point::new(x + dx as f64 / 2.0, y),
            )
            .unwrap()
        }
    })
}

fn continuous_element() -> impl Strategy<Value = ParetoElement> {
    (0.0..10.0f64, 0.0..10.0f64, 0.0..3.0f64, 0.0..3.0f64).prop_map(|(x, y, dx, dy)| {
        ParetoElement::from_endpoints(Point::new(x, y + dy), Point::new(x + dx, y)).unwrap()
    })
}

fn element() -> impl Strategy<Value = ParetoElement> {
    prop_oneof![grid_element(), continuous_element()]
}

fn mode() -> impl Strategy<Value = RebalanceMode> {
    prop::sample::select(RebalanceMode::ALL.to_vec())
}

fn small_policy(mode: RebalanceMode) -> RebalancePolicy {
    // low triggers so the periodic passes fire on short inputs
    RebalancePolicy::new(mode).with_triggers(4, 1.5).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tree_matches_list(elems in prop::collection::vec(element(), 1..60), mode in mode(), prune: bool) {
        let mut tree = NdTree::new(small_policy(mode)).with_subtree_pruning(prune);
        let mut list = NdList::new();
        for e in &elems {
            tree.insert(*e);
            list.insert(*e);
            let v = tree.validate();
            prop_assert!(v.is_empty(), "{:?}", v);
        }
        let a = tree.nondominated_set().unwrap();
        let b = list.nondominated_set().unwrap();
        prop_assert!(sets_match(&a, &b, 1e-7), "tree {:?}\nlist {:?}", a, b);
    }

    #[test]
    fn insertion_order_does_not_change_the_set(
        elems in prop::collection::vec(continuous_element(), 1..40),
        seed: u64,
    ) {
        let mut shuffled = elems.clone();
        // deterministic Fisher-Yates
        let mut s = seed | 1;
        for i in (1..shuffled.len()).rev() {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let mut a = NdTree::default();
        let mut b = NdTree::default();
        for e in &elems {
            a.insert(*e);
        }
        for e in &shuffled {
            b.insert(*e);
        }
        let (a, b) = (a.nondominated_set().unwrap(), b.nondominated_set().unwrap());
        prop_assert!(sets_match(&a, &b, 1e-7), "{:?}\n{:?}", a, b);
    }

    #[test]
    fn rebalance_preserves_order_and_meets_criterion(
        elems in prop::collection::vec(element(), 1..80),
        delta in 0.05..0.95f64,
    ) {
        let policy = RebalancePolicy::new(RebalanceMode::A0).with_delta(delta).unwrap();
        let mut tree = NdTree::new(policy);
        for e in &elems {
            tree.insert(*e);
        }
        let before = tree.elements_in_order();
        tree.rebalance_full();
        prop_assert_eq!(tree.elements_in_order(), before);
        prop_assert!(tree.unbalanced_nodes().is_empty());
        prop_assert!(tree.validate().is_empty());
    }

    #[test]
    fn removal_drops_exactly_one_element(
        elems in prop::collection::vec(element(), 1..60),
        pick in any::<prop::sample::Index>(),
    ) {
        let mut tree = NdTree::default();
        tree.enable_removal_probe();
        for e in &elems {
            tree.insert(*e);
        }
        let mut order = tree.elements_in_order();
        let target = order[pick.index(order.len())];
        let mut id = tree.root().unwrap();
        // descend by in-order rank
        let mut rank = pick.index(order.len());
        loop {
            let left = tree.left(id).map_or(0, |l| tree.size(l));
            if rank < left {
                id = tree.left(id).unwrap();
            } else if rank == left {
                break;
            } else {
                rank -= left + 1;
                id = tree.right(id).unwrap();
            }
        }
        prop_assert_eq!(tree.element(id), target);
        tree.remove_node(id).unwrap();
        order.retain(|e| *e != target);
        prop_assert_eq!(tree.elements_in_order(), order);
        prop_assert!(tree.validate().is_empty());
        let trace = tree.removal_traces().last().copied().unwrap();
        prop_assert!(trace.visits <= trace.depth_before);
    }

    #[test]
    fn canonicalize_is_idempotent(elems in prop::collection::vec(element(), 1..60)) {
        let mut list = NdList::new();
        for e in &elems {
            list.insert(*e);
        }
        let once = list.nondominated_set().unwrap();
        let twice = canonicalize(once.clone()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn generated_segments_slope_downward(n in 1usize..400, mu in 0.0..10.0f64, seed: u64) {
        let g = GeneratorState::new(GeneratorConfig::new(n, mu, seed).unwrap());
        let mut count = 0;
        for e in g.flatten() {
            prop_assert!(e.x1() <= e.x2() && e.y1() >= e.y2());
            if !e.is_point() {
                prop_assert!(e.x1() < e.x2() && e.y1() > e.y2());
            }
            count += 1;
        }
        prop_assert_eq!(count, n);
    }
}
