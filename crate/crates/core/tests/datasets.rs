mod common;

use proptest::prelude::*;

use common::{constants, data_dir};
use hydrogenic_se::dataset::synthetic::{bundled_models, render_bundled};
use hydrogenic_se::dataset::{
    format_f_table, parse_coefficients, parse_f_table, render_plotdata, save_plotdata, Cell,
    FSample, FSeries, LabelPolicy, PlotFormat, PlotTable, BUNDLED_COEFFICIENTS,
};
use hydrogenic_se::quantities::parse_state;
use hydrogenic_se::{NuclearCharge, UncertainValue};

#[test]
fn bundled_synthetic_tables_match_their_generator() {
    let c = constants();
    for m in bundled_models() {
        let path = data_dir().join("synthetic").join(m.file_name);
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            on_disk,
            render_bundled(&m, &c),
            "{} is stale; run the gen_samples example",
            m.file_name
        );
    }
}

#[test]
fn bundled_tables_parse_with_literature_coefficients_where_available() {
    let c = constants();
    let coeffs = parse_coefficients(BUNDLED_COEFFICIENTS).unwrap();
    for m in bundled_models() {
        let text = std::fs::read_to_string(data_dir().join("synthetic").join(m.file_name)).unwrap();
        let loaded = parse_f_table(&text, &c, LabelPolicy::Error).unwrap();
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.series.len(), m.zs.len());
        if let Some(k) = coeffs.get(&m.model.state) {
            assert_eq!(k.a40.value(), m.model.a40);
            assert_eq!(k.a60.unwrap().value(), m.model.a60);
        }
    }
}

#[test]
fn plotdata_is_deterministic_and_header_only_when_empty() {
    let dir = tempfile::tempdir().unwrap();
    let mut t = PlotTable::new(&["state", "z", "f"]);
    t.push(vec![
        Cell::from("4D5/2"),
        Cell::from(20u32),
        Cell::from(0.0437),
    ]);
    t.push(vec![Cell::from("4D5/2"), Cell::from(25u32), Cell::Missing]);
    for format in [PlotFormat::Csv, PlotFormat::JsonLines] {
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        save_plotdata(&t, &a, format).unwrap();
        save_plotdata(&t, &b, format).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let empty = PlotTable::new(&["state", "z"]);
    assert_eq!(render_plotdata(&empty, PlotFormat::Csv), "state,z\n");
}

proptest! {
    #[test]
    fn f_tables_round_trip(
        label in prop::sample::select(vec!["2P1/2", "4P3/2", "4D5/2", "5G7/2", "12K15/2"]),
        rows in proptest::collection::btree_map(1u32..=110, (-10.0f64..10.0, 0.0f64..1e-3), 1..20),
    ) {
        let c = constants();
        let samples = rows
            .iter()
            .map(|(&z, &(f, s))| FSample { z: NuclearCharge::new(z).unwrap(), f: UncertainValue::new(f, s).unwrap() })
            .collect();
        let series = FSeries::new(parse_state(label).unwrap(), samples, c.clone()).unwrap();
        let text = format_f_table(&series, &["round trip"]);
        let back = parse_f_table(&text, &c, LabelPolicy::Error).unwrap().series;
        prop_assert_eq!(&back, &series);
        prop_assert_eq!(format_f_table(&back, &["round trip"]), text);
    }
}
