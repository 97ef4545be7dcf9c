use drnews_core::backtest::{
    generate_synthetic, load_market_data, write_market_data, SynthConfig, SynthGeneration,
};

#[test]
fn two_years_of_synthetic_hours_load_back() {
    let cfg = SynthConfig {
        generation: SynthGeneration::Varying,
        ..SynthConfig::default()
    };
    let records = generate_synthetic(&cfg).unwrap();
    assert_eq!(records.len(), 731 * 24);

    let dir = tempfile::tempdir().unwrap();
    let (market, forecasts) = write_market_data(dir.path(), &records).unwrap();
    let loaded = load_market_data(&market, &forecasts, true).unwrap();
    assert_eq!(loaded.records.len(), 731 * 24);
    assert!(loaded.warnings.is_empty());
    assert_eq!(loaded.records, records);
}
