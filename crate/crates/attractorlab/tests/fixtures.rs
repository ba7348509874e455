use attractorlab::fixtures::{self, mint_all};

#[test]
fn minted_records_match_the_committed_files() {
    for record in mint_all().unwrap() {
        let stored = fixtures::load(&record.name).unwrap();
        assert_eq!(stored, record, "fixture {} is stale; rerun mint_fixtures", record.name);
    }
}

#[test]
fn save_and_load_round_trip() {
    let dir = std::env::temp_dir().join(format!("attractorlab-fixtures-{}", std::process::id()));
    let record = fixtures::ball_sizes();
    fixtures::save(&dir, &record).unwrap();
    assert_eq!(fixtures::load_from(&dir, &record.name).unwrap(), record);
    std::fs::remove_dir_all(&dir).unwrap();
}
