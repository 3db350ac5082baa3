//! Hand-written presentations of every ℓ-group of order at most 8.
//!
//! Larger orders come from data files (see `scripts/export_pc.g`).

/// All groups of orders 2, 3, 4, 5, 7 and 8, in the pc file format.
pub const SMALL_GROUPS_PC: &str = "\
# groups of order at most 8
# provenance: C2
GROUP 2 1
PRIME 2
NGENS 1
END
# provenance: C3
GROUP 3 1
PRIME 3
NGENS 1
END
# provenance: C4
GROUP 4 1
PRIME 2
NGENS 2
POWER 1 = g2^1
END
# provenance: C2 x C2
GROUP 4 2
PRIME 2
NGENS 2
END
# provenance: C5
GROUP 5 1
PRIME 5
NGENS 1
END
# provenance: C7
GROUP 7 1
PRIME 7
NGENS 1
END
# provenance: C8
GROUP 8 1
PRIME 2
NGENS 3
POWER 1 = g2^1
POWER 2 = g3^1
END
# provenance: C4 x C2
GROUP 8 2
PRIME 2
NGENS 3
POWER 1 = g3^1
END
# provenance: dihedral D4
GROUP 8 3
PRIME 2
NGENS 3
POWER 2 = g3^1
COMM 2 1 = g3^1
END
# provenance: quaternion Q8
GROUP 8 4
PRIME 2
NGENS 3
POWER 1 = g3^1
POWER 2 = g3^1
COMM 2 1 = g3^1
END
# provenance: C2 x C2 x C2
GROUP 8 5
PRIME 2
NGENS 3
END
";

/// The fixture record with the given provenance label.
pub fn fixture(label: &str) -> Option<crate::pc::PcRecord> {
    crate::pc::parse_pc_file(SMALL_GROUPS_PC)
        .ok()?
        .into_iter()
        .find(|r| r.provenance.as_deref() == Some(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;
    use crate::pc::parse_pc_file;
    use crate::Limits;

    #[test]
    fn all_fixtures_parse_with_expected_orders() {
        let recs = parse_pc_file(SMALL_GROUPS_PC).unwrap();
        let orders: Vec<u128> = recs.iter().map(|r| r.id.order).collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 5, 7, 8, 8, 8, 8, 8]);
        for r in &recs {
            let g = r.presentation.to_perm_group(&Limits::default()).unwrap();
            assert_eq!(g.order(), r.id.order);
        }
    }

    #[test]
    fn order_8_groups_are_pairwise_distinct() {
        // (rank, abelian, number of involutions) separates the five groups
        let limits = Limits::default();
        let mut sigs = Vec::new();
        for r in parse_pc_file(SMALL_GROUPS_PC).unwrap().iter().filter(|r| r.id.order == 8) {
            let g = r.presentation.to_perm_group(&limits).unwrap();
            let inv = g.elements(&limits).unwrap().iter().filter(|p| p.order() == 2).count();
            sigs.push((ops::rank(&g, 2).unwrap(), g.is_abelian(), inv));
        }
        assert_eq!(sigs, vec![(1, true, 1), (2, true, 3), (2, false, 5), (2, false, 1), (3, true, 7)]);
    }

    #[test]
    fn lookup_by_label() {
        assert_eq!(fixture("quaternion Q8").unwrap().id.index, 4);
        assert!(fixture("nope").is_none());
    }
}
