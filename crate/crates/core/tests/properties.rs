//! Property tests for the spec-level invariants of the residue maps, the
//! intersection predicate, and the file formats.

use proptest::prelude::*;

use fermat_lines::{
    is_skew_family, meets, phi_minus, phi_plus, reduce, validate_structured, Family, LineId,
    SurfaceParams,
};

fn params_strategy() -> impl Strategy<Value = SurfaceParams> {
    (3u32..=40).prop_map(|d| SurfaceParams::canonical(d).unwrap())
}

fn distinct_pair(d: u32) -> impl Strategy<Value = (LineId, LineId)> {
    let n = 3 * (d as usize) * (d as usize);
    (0..n, 0..n - 1).prop_map(move |(u, v)| {
        let v = if v >= u { v + 1 } else { v };
        (
            LineId::from_vertex_id(d, u).unwrap(),
            LineId::from_vertex_id(d, v).unwrap(),
        )
    })
}

proptest! {
    #[test]
    fn reduce_is_congruent_and_in_range(a in any::<i64>(), d in 1i64..=1000) {
        let r = reduce(a, d).unwrap();
        prop_assert!((r as i64) < d);
        prop_assert_eq!((a as i128 - r as i128).rem_euclid(d as i128), 0);
    }

    #[test]
    fn meets_is_symmetric(
        (params, pair) in params_strategy()
            .prop_flat_map(|p| distinct_pair(p.d()).prop_map(move |q| (p, q)))
    ) {
        let (a, b) = pair;
        prop_assert_eq!(
            meets(&params, a, b).unwrap(),
            meets(&params, b, a).unwrap()
        );
    }

    /// For odd d, two disjoint lines of one stratum on the same anti-diagonal
    /// are on distinct diagonals, and vice versa.
    #[test]
    fn diagonal_antidiagonal_exclusion(
        (params, pair) in (3u32..=20)
            .prop_map(|x| SurfaceParams::canonical(2 * x + 1).unwrap())
            .prop_flat_map(|p| distinct_pair(p.d()).prop_map(move |q| (p, q)))
    ) {
        let (a, b) = pair;
        prop_assume!(a.s() == b.s());
        prop_assume!(!meets(&params, a, b).unwrap());
        let d = params.d();
        let plus_eq = phi_plus(d, a.k(), a.i()) == phi_plus(d, b.k(), b.i());
        let minus_eq = phi_minus(d, a.k(), a.i()) == phi_minus(d, b.k(), b.i());
        prop_assert!(!(plus_eq && minus_eq));
    }

    #[test]
    fn family_file_round_trip(
        (d, picks) in (3u32..=12).prop_flat_map(|d| {
            let n = 3 * (d as usize) * (d as usize);
            (Just(d), proptest::collection::btree_set(0..n, 0..=12))
        })
    ) {
        let lines: Vec<LineId> = picks
            .into_iter()
            .map(|v| LineId::from_vertex_id(d, v).unwrap())
            .collect();
        let family = Family::new(d, lines).unwrap();
        let mut buf = Vec::new();
        family.write_to(&mut buf).unwrap();
        let back = Family::read_from(&buf[..]).unwrap();
        prop_assert_eq!(back.d(), family.d());
        prop_assert_eq!(back.lines(), family.lines());
    }

    /// The two validators always return the same verdict, and a skew verdict
    /// never exceeds the per-stratum bound d.
    #[test]
    fn validators_agree(
        (d, picks) in (3u32..=8).prop_flat_map(|d| {
            let n = 3 * (d as usize) * (d as usize);
            (Just(d), proptest::collection::btree_set(0..n, 1..=16))
        })
    ) {
        let params = SurfaceParams::canonical(d).unwrap();
        let lines: Vec<LineId> = picks
            .into_iter()
            .map(|v| LineId::from_vertex_id(d, v).unwrap())
            .collect();
        let family = Family::new(d, lines).unwrap();
        let pairwise = is_skew_family(&params, &family).unwrap();
        let structural = validate_structured(&params, &family).unwrap();
        prop_assert_eq!(pairwise.is_skew, structural.is_skew);
        prop_assert_eq!(pairwise.is_skew, pairwise.violating_pair.is_none());
        prop_assert_eq!(structural.is_skew, structural.violating_pair.is_none());
        if pairwise.is_skew {
            for size in pairwise.stratum_sizes {
                prop_assert!(size <= d as usize);
            }
        }
    }
}
