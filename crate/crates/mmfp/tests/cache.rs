use std::fs;

use mmfp::cache::{cache_load, cache_store, file_name, CacheEntry, CachedBasis, FORMAT_TAG};
use mmfp::run_command;
use mmfp_core::field::Prime;
use mmfp_core::spaces::miller_basis;
use mmfp_core::BasisSource;

fn p(q: u32) -> Prime {
    Prime::new(q).unwrap()
}

#[test]
fn store_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let space = miller_basis(24, p(5), 20, true).unwrap();
    let entry = CacheEntry::from_space(&space);
    let path = cache_store(&entry, dir.path()).unwrap();
    assert_eq!(path.file_name().unwrap().to_str().unwrap(), file_name(5, 24, true));
    let back = cache_load(&path).unwrap();
    assert_eq!(back, entry);
    assert_eq!(back.to_space().unwrap(), space);
    assert_eq!(back.format, FORMAT_TAG);
}

#[test]
fn corrupted_tag_is_a_miss() {
    let dir = tempfile::tempdir().unwrap();
    let space = miller_basis(24, p(5), 20, false).unwrap();
    let mut entry = CacheEntry::from_space(&space);
    entry.format = "mmfp-cache-v0".into();
    let path = cache_store(&entry, dir.path()).unwrap();
    assert!(cache_load(&path).is_none());

    fs::write(&path, "not json").unwrap();
    assert!(cache_load(&path).is_none());

    // a miss recomputes and overwrites with a valid entry
    let cached = CachedBasis::new(dir.path());
    assert_eq!(cached.basis(24, p(5), 20, false).unwrap(), space);
    assert_eq!(cache_load(&path).unwrap().format, FORMAT_TAG);
}

#[test]
fn tampered_rows_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let space = miller_basis(24, p(5), 20, true).unwrap();
    let mut entry = CacheEntry::from_space(&space);
    entry.rows[0][2] = "3".into();
    cache_store(&entry, dir.path()).unwrap();
    let cached = CachedBasis::new(dir.path());
    assert!(cached.lookup(24, p(5), 20, true).is_none());
    assert_eq!(cached.basis(24, p(5), 20, true).unwrap(), space);
}

#[test]
fn lower_precision_is_recomputed_and_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(file_name(5, 24, false));
    let small = miller_basis(24, p(5), 10, false).unwrap();
    cache_store(&CacheEntry::from_space(&small), dir.path()).unwrap();

    let cached = CachedBasis::new(dir.path());
    assert!(cached.lookup(24, p(5), 20, false).is_none());
    let big = cached.basis(24, p(5), 20, false).unwrap();
    assert_eq!(big, miller_basis(24, p(5), 20, false).unwrap());
    assert_eq!(cache_load(&path).unwrap().precision, "20");

    // a larger stored precision serves smaller requests by truncation
    let fresh = CachedBasis::new(dir.path());
    assert_eq!(fresh.basis(24, p(5), 12, false).unwrap(), miller_basis(24, p(5), 12, false).unwrap());
}

#[test]
fn unwritable_cache_still_computes() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cached = CachedBasis::new(blocker.join("sub"));
    assert_eq!(cached.basis(12, p(7), 10, true).unwrap(), miller_basis(12, p(7), 10, true).unwrap());
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap().to_string();
    let commands: [&[&str]; 3] = [
        &["verify", "--p", "7", "--source", "eisenstein:4", "--format", "json"],
        &["corollary", "--p", "5", "--k", "24", "--format", "json"],
        &["eigensystems", "--p", "7", "--k", "48", "--cuspidal", "--format", "json"],
    ];
    for args in commands {
        let plain = run_command(std::iter::once("mmfp").chain(args.iter().copied()));
        let with = || {
            run_command(
                ["mmfp"]
                    .into_iter()
                    .chain(args.iter().copied())
                    .chain(["--cache-dir", cache.as_str()]),
            )
        };
        let cold = with();
        let warm = with();
        assert_eq!(plain.code, 0);
        assert_eq!(plain.stdout, cold.stdout);
        assert_eq!(plain.stdout, warm.stdout);
    }
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
}
