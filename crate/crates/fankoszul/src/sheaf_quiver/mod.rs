//! Modules over the structure sheaf on the face poset: stalks, restrictions,
//! sections over sets of faces, and the flabby / locally free / pure predicates.

mod lf;
mod quiver;

pub use lf::{restriction_matrix_at, LfMap, LfSheaf};
pub use quiver::{Predicates, QuiverSheaf, SectionModule};

use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::Result;

pub fn structure_sheaf(fan: &Arc<Fan>) -> LfSheaf {
    LfSheaf::structure_sheaf(fan)
}

pub fn sections(sheaf: &QuiverSheaf, faces: &[FaceId], over: Option<FaceId>) -> Result<SectionModule> {
    sheaf.sections(faces, over)
}

pub fn relative_sections(sheaf: &QuiverSheaf, tau: FaceId) -> Result<SectionModule> {
    sheaf.relative_sections(tau)
}

pub fn predicates(sheaf: &QuiverSheaf) -> Result<Predicates> {
    sheaf.predicates()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn hilbert(s: &SectionModule, upto: i64) -> Vec<usize> {
        (0..=upto).map(|g| s.module.dim(g)).collect()
    }

    #[test]
    fn structure_sheaf_is_functorial() {
        for (_, f) in fixtures::all() {
            let a = structure_sheaf(&Arc::new(f));
            assert!(a.is_functorial());
            assert!(a.to_quiver(0, 6).is_linear());
        }
    }

    #[test]
    fn sections_over_closed_face_match_stalk() {
        let fan = Arc::new(fixtures::fx1());
        let q = structure_sheaf(&fan).to_quiver(0, 8);
        let s2 = fan.find(&[0, 1]).unwrap();
        let s = q.sections(&fan.closure(s2), Some(s2)).unwrap();
        assert_eq!(hilbert(&s, 8), vec![1, 0, 2, 0, 3, 0, 4, 0, 5]);
    }

    #[test]
    fn boundary_sections_fx1() {
        let fan = Arc::new(fixtures::fx1());
        let q = structure_sheaf(&fan).to_quiver(0, 8);
        let s2 = fan.find(&[0, 1]).unwrap();
        let s = q.sections(&fan.boundary(s2), Some(s2)).unwrap();
        assert_eq!(hilbert(&s, 6), vec![1, 0, 2, 0, 2, 0, 2]);
        let (shape, _) = s.module.minimal_generators().unwrap();
        assert_eq!(shape.gens, vec![0]);
    }

    #[test]
    fn boundary_sections_fx2_in_grade_two() {
        let fan = Arc::new(fixtures::fx2());
        let q = structure_sheaf(&fan).to_quiver(0, 8);
        let top = fan.top().unwrap();
        let s = q.sections(&fan.boundary(top), Some(top)).unwrap();
        assert_eq!(s.module.dim(2), 4);
    }

    #[test]
    fn relative_sections_are_ideals() {
        let fan = Arc::new(fixtures::fx1());
        let q = structure_sheaf(&fan).to_quiver(0, 8);
        let s2 = fan.find(&[0, 1]).unwrap();
        let r = q.relative_sections(s2).unwrap();
        assert_eq!(hilbert(&r, 8), vec![0, 0, 0, 0, 1, 0, 2, 0, 3]);
        let r0 = q.relative_sections(0).unwrap();
        assert_eq!(r0.module.dim(0), 1);
        let fx3 = Arc::new(fixtures::fx3());
        let r3 = structure_sheaf(&fx3).to_quiver(0, 6).relative_sections(1).unwrap();
        assert_eq!(hilbert(&r3, 6), vec![0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn purity_predicates() {
        let fx1 = Arc::new(fixtures::fx1());
        let p = structure_sheaf(&fx1).to_quiver(0, 8).predicates().unwrap();
        assert!(p.is_pure);
        let fx2 = Arc::new(fixtures::fx2());
        let p2 = structure_sheaf(&fx2).to_quiver(0, 8).predicates().unwrap();
        assert!(p2.is_locally_free);
        assert!(!p2.is_flabby);
        let s2 = fx1.find(&[0, 1]).unwrap();
        let sky = LfSheaf::point_face(&fx1, s2).to_quiver(0, 8).predicates().unwrap();
        assert_eq!(sky, Predicates { is_flabby: true, is_locally_free: true, is_pure: true });
    }

    #[test]
    fn quiver_round_trip_to_locally_free() {
        let fan = Arc::new(fixtures::fx2());
        let a = structure_sheaf(&fan);
        let (b, _) = a.to_quiver(0, 8).to_lf().unwrap().unwrap();
        assert_eq!(a, b);
    }
}
