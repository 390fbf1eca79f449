use super::*;

fn inner_rows(rows: &[ClassRow]) -> Vec<&ClassRow> {
    rows.iter().filter(|r| r.descriptor.bases.is_empty()).collect()
}

#[test]
fn g2_has_two_inner_classes() {
    let ctx = Context::new("G2", 1).unwrap();
    let rows = classify(&ctx).unwrap();
    assert_eq!(inner_rows(&rows).len(), 2);
    assert!(rows.iter().all(|r| !r.unresolved));
}

#[test]
fn f4_inner_block_has_four_classes() {
    let ctx = Context::new("F4", 3).unwrap();
    let rows = classify(&ctx).unwrap();
    assert_eq!(inner_rows(&rows).len(), 4);
}

#[test]
fn rows_locate_to_their_own_keys() {
    for (alg, node) in [("G2", 1), ("F4", 2), ("F4", 3), ("E6", 4)] {
        let ctx = Context::new(alg, node).unwrap();
        let rows = classify(&ctx).unwrap();
        for (i, row) in rows.iter().enumerate() {
            let inv = ctx.evaluate(&row.descriptor).unwrap();
            let (li, key) = ctx.locate(&inv).unwrap();
            assert_eq!(li, row.linear_class);
            assert!(row.keys.contains(&key), "{alg} {node} {}", row.descriptor);
            assert_eq!(ctx.row_of(&rows, &inv).unwrap(), Some(i));
        }
    }
}

#[test]
fn merged_counts_add_up_to_the_class_space() {
    let ctx = Context::new("F4", 3).unwrap();
    let rows = classify(&ctx).unwrap();
    for (li, lc) in ctx.linear.iter().enumerate() {
        let space = ClassSpace::new(&ctx.rs, lc.base.clone()).unwrap();
        let merged: usize = rows.iter().filter(|r| r.linear_class == li).map(|r| r.merged).sum();
        let identity_class = usize::from(li == 0);
        assert_eq!(merged + identity_class, space.size());
    }
}

#[test]
fn separation_reports_the_first_differing_invariant() {
    let ctx = Context::new("E8", 2).unwrap();
    let eval = |t: &str| ctx.evaluate(&Descriptor::parse(8, "-", t).unwrap()).unwrap();
    let a = eval("K3");
    assert_eq!(separate(&ctx, &a, &a).unwrap(), Separation::Indistinguishable);
    assert_eq!(separate(&ctx, &a, &eval("K2 + K3")).unwrap(), Separation::Distinct("ideal membership in h".into()));
    assert_eq!(separate(&ctx, &eval("K1"), &eval("K8")).unwrap(), Separation::Distinct("k".into()));
}

#[test]
fn ideal_membership_is_only_defined_for_inner_involutions() {
    let ctx = Context::new("E6", 4).unwrap();
    let outer = ctx.evaluate(&Descriptor::parse(6, "psi", "0").unwrap()).unwrap();
    assert!(ideal_membership(&ctx, &outer).is_none());
    let inner = ctx.evaluate(&Descriptor::parse(6, "-", "K1").unwrap()).unwrap();
    assert!(ideal_membership(&ctx, &inner).is_some());
}

#[test]
fn bases_round_trip_through_tokens() {
    let b = parse_bases("tau3*phi").unwrap();
    let d = Descriptor { bases: b, twist: Coweight::parse(8, "K1").unwrap() };
    assert_eq!(d.base_token(), "tau3*phi");
    assert!(parse_bases("tau9").is_err());
    assert_eq!(parse_bases("-").unwrap(), vec![]);
}

#[test]
fn out_of_scope_nodes_are_rejected() {
    assert!(Context::new("E8", 1).is_err());
    assert!(Context::new("E8", 9).is_err());
}
