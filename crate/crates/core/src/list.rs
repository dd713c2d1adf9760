//! Unordered list baseline: every insertion is compared against every item.

use crate::geometry::{canonicalize, clip_parts, may_clip, GeometryError, ParetoElement};
use crate::tree::InsertReport;
use crate::NondominatedStore;

#[derive(Clone, Debug, Default)]
pub struct NdList {
    items: Vec<ParetoElement>,
}

impl NdList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, elem: ParetoElement) -> InsertReport {
        let mut incoming = vec![elem];
        for item in &self.items {
            if !incoming.iter().any(|piece| may_clip(piece, item)) {
                continue;
            }
            incoming = incoming
                .iter()
                .flat_map(|piece| clip_parts(piece, item))
                .collect();
            if incoming.is_empty() {
                return InsertReport::default();
            }
        }
        // stored parts equal to part of `elem` survived the first pass on
        // the stored side, so only the new pieces clip the old items
        let mut kept = Vec::with_capacity(self.items.len() + incoming.len());
        for item in self.items.drain(..) {
            if !incoming.iter().any(|piece| may_clip(&item, piece)) {
                kept.push(item);
                continue;
            }
            let mut parts = vec![item];
            for piece in &incoming {
                parts = parts.iter().flat_map(|p| clip_parts(p, piece)).collect();
            }
            kept.extend(parts);
        }
        let pieces_added = incoming.len();
        kept.extend(incoming);
        self.items = kept;
        InsertReport {
            added_any: true,
            pieces_added,
        }
    }

    pub fn items(&self) -> &[ParetoElement] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn nondominated_set(&self) -> Result<Vec<ParetoElement>, GeometryError> {
        canonicalize(self.items.iter().copied())
    }
}

impl NondominatedStore for NdList {
    fn insert(&mut self, elem: ParetoElement) -> InsertReport {
        NdList::insert(self, elem)
    }

    fn nondominated_set(&self) -> Result<Vec<ParetoElement>, GeometryError> {
        NdList::nondominated_set(self)
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sets_match, Point};

    fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> ParetoElement {
        ParetoElement::segment(Point::new(x1, y1), Point::new(x2, y2)).unwrap()
    }

    #[test]
    fn clips_both_ways() {
        let mut l = NdList::new();
        l.insert(seg(6.0, 16.0, 7.0, 10.0));
        let r = l.insert(ParetoElement::point(5.0, 11.0));
        assert_eq!(r.pieces_added, 1);
        let want = [
            ParetoElement::point(5.0, 11.0),
            seg(41.0 / 6.0, 11.0, 7.0, 10.0),
        ];
        assert!(sets_match(&l.nondominated_set().unwrap(), &want, 1e-9));
    }

    #[test]
    fn dominated_insert_is_rejected() {
        let mut l = NdList::new();
        l.insert(ParetoElement::point(1.0, 1.0));
        let r = l.insert(seg(2.0, 5.0, 5.0, 2.0));
        assert!(!r.added_any);
        assert_eq!(l.len(), 1);
    }

    #[test]
    fn split_of_stored_segment() {
        let mut l = NdList::new();
        l.insert(seg(7.0, 10.0, 10.0, 5.0));
        l.insert(seg(8.0, 7.0, 14.0, 3.0));
        let want = [
            seg(7.0, 10.0, 8.0, 25.0 / 3.0),
            seg(8.0, 7.0, 28.0 / 3.0, 55.0 / 9.0),
            seg(28.0 / 3.0, 55.0 / 9.0, 10.0, 5.0),
            seg(11.0, 5.0, 14.0, 3.0),
        ];
        let got = l.nondominated_set().unwrap();
        assert!(sets_match(&got, &want, 1e-9), "{got:?}");
    }
}
