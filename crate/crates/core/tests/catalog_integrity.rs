use nilcoh::catalog::{find, load_catalog, nilpotent_six};
use nilcoh::cohomology::{de_rham, Theory};

#[test]
fn poincare_fixtures_match() {
    for e in load_catalog().unwrap() {
        if let Some(exp) = e.expected("poincare") {
            let t = de_rham(&e.structure).unwrap();
            assert_eq!(t.render_poincare(), exp.value, "{}", e.name);
        }
    }
}

#[test]
fn nilpotent_flags_match_structure() {
    for e in load_catalog().unwrap() {
        assert_eq!(e.structure.is_nilpotent(), e.nilpotent, "{}", e.name);
    }
    assert!(nilpotent_six()
        .unwrap()
        .iter()
        .all(|e| e.structure.unimodularity_check().holds));
}

#[test]
fn h8_complex_fixtures() {
    let e = find("h8").unwrap().unwrap();
    let b = e.complex[0].input.resolve(&e.structure).unwrap();
    for (theory, name) in [
        (Theory::Dolbeault, "dolbeault"),
        (Theory::BottChern, "bott-chern"),
        (Theory::Aeppli, "aeppli"),
    ] {
        let t = b.cohomology(theory).unwrap();
        let s: Vec<String> = t.totals().iter().map(|x| x.to_string()).collect();
        assert_eq!(s.join(","), e.expected(name).unwrap().value, "{name}");
    }
}
