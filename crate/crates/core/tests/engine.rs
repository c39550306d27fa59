use std::sync::Arc;

use opch_core::derived::dim_dervar;
use opch_core::term::enumerate_multilinear;
use opch_core::variety::VarietyName::{self, *};
use opch_core::variety::{cache_file_name, decorate_component_direct, CacheFile};
use opch_core::{Config, Engine, Error, Execution};

fn cached(dir: &std::path::Path) -> Engine {
    Engine::new(Config {
        cache_dir: Some(dir.to_path_buf()),
        ..Config::default()
    })
}

fn rows(e: &Engine, v: VarietyName, n: usize, w: i64) -> Vec<Vec<(usize, String)>> {
    CacheFile::from_component(&e.component(v, n, w).unwrap()).rows
}

#[test]
fn decorated_fast_path_matches_direct_build() {
    let e = Engine::default();
    for v in [Com, As, Alt, Assos, BiCom, Nov, Zinb] {
        for n in 1..=3 {
            let und = e.component(v, n, -(n as i64)).unwrap();
            for w in [-(n as i64) + 1, -1, 0] {
                if w < -(n as i64) {
                    continue;
                }
                let fast = e.component(v, n, w).unwrap();
                let direct = decorate_component_direct(&und, w).unwrap();
                assert_eq!(fast.ambient(), direct.ambient());
                assert_eq!(
                    fast.basis().rows(),
                    direct.basis().rows(),
                    "{v} n={n} w={w}"
                );
            }
        }
    }
    let und = e.component(Alt, 4, -4).unwrap();
    let direct = decorate_component_direct(&und, -1).unwrap();
    assert_eq!(
        e.component(Alt, 4, -1).unwrap().basis().rows(),
        direct.basis().rows()
    );
}

#[test]
fn sequential_and_parallel_agree() {
    let par = Engine::default();
    let seq = Engine::new(Config {
        execution: Execution::Sequential,
        ..Config::default()
    });
    assert_eq!(seq.execution(), Execution::Sequential);
    for v in [BiCom, Alt, Assos, Zinb] {
        assert_eq!(rows(&par, v, 4, -1), rows(&seq, v, 4, -1));
        for n in 2..=3 {
            let (a, b) = (par.expansion(v, n).unwrap(), seq.expansion(v, n).unwrap());
            assert_eq!(a.images(), b.images());
            assert_eq!(a.rank(), b.rank());
        }
    }
    assert_eq!(
        dim_dervar(&par, BiCom, 4).unwrap(),
        dim_dervar(&seq, BiCom, 4).unwrap()
    );
}

#[test]
fn arity_and_operation_checks() {
    let e = Engine::default();
    assert!(matches!(
        e.component(Alt, 5, -1),
        Err(Error::ArityTooLarge { .. })
    ));
    assert_eq!(e.dim_variety(BiCom, 5).unwrap(), 30);
    assert!(e.component(BiCom, 6, -6).is_err());
    assert!(e.component(DerAlt, 3, -1).is_err());
    assert!(e.di_component(Alt, 3).is_err());
    assert!(e.component(Com, 2, -3).is_err());
    assert_eq!(e.dim_variety(DerBiCom, 3).unwrap(), 36);
}

#[test]
fn memoized_components_are_shared() {
    let e = Engine::default();
    let a = e.component(Assos, 3, -1).unwrap();
    let b = e.component(Assos, 3, -1).unwrap();
    assert!(Arc::ptr_eq(&a, &b));
    let got: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|_| s.spawn(|| e.component(BiCom, 4, -1).unwrap()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(got.windows(2).all(|w| Arc::ptr_eq(&w[0], &w[1])));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = cached(dir.path());
    let want = rows(&first, Alt, 3, -1);
    let path = dir.path().join(cache_file_name(Alt, 3, -1));
    assert!(path.exists());
    assert!(dir.path().join(cache_file_name(Alt, 3, -3)).exists());
    let text = std::fs::read_to_string(&path).unwrap();
    let file: CacheFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.arity, 3);
    assert_eq!(
        file.ambient.len(),
        enumerate_multilinear(3, -1).unwrap().len()
    );
    assert!(file.rows.iter().flatten().all(|(_, q)| q.contains('/')));

    let second = cached(dir.path());
    assert_eq!(rows(&second, Alt, 3, -1), want);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn bad_cache_files_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let want = rows(&Engine::default(), BiCom, 3, -1);
    let path = dir.path().join(cache_file_name(BiCom, 3, -1));
    for junk in [
        "{not json",
        "{}",
        r#"{"variety":"bicom","arity":3,"weight":-1,"ambient":[],"rows":[]}"#,
    ] {
        std::fs::write(&path, junk).unwrap();
        let e = cached(dir.path());
        assert_eq!(rows(&e, BiCom, 3, -1), want, "{junk}");
        let fixed: CacheFile =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(fixed.rows, want);
    }

    // Files that parse but disagree with what they claim to hold.
    let good: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let mut wrong_key = good.clone();
    wrong_key.arity = 4;
    let mut zero_den = good.clone();
    zero_den.rows[0][0].1 = "1/0".into();
    let mut swapped = good.clone();
    swapped.ambient.swap(0, 1);
    let mut not_echelon = good.clone();
    not_echelon.rows.reverse();
    for broken in [wrong_key, zero_den, swapped, not_echelon] {
        assert_ne!(broken, good);
        std::fs::write(&path, serde_json::to_string(&broken).unwrap()).unwrap();
        assert_eq!(rows(&cached(dir.path()), BiCom, 3, -1), want);
        let fixed: CacheFile =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(fixed, good);
    }
}

#[test]
fn concurrent_writers_leave_a_valid_file() {
    let dir = tempfile::tempdir().unwrap();
    let want = rows(&Engine::default(), Assos, 3, -1);
    let handles: Vec<_> = (0..6)
        .map(|_| {
            let d = dir.path().to_path_buf();
            std::thread::spawn(move || rows(&cached(&d), Assos, 3, -1))
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), want);
    }
    let path = dir.path().join(cache_file_name(Assos, 3, -1));
    let file: CacheFile = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(file.rows, want);
}

#[test]
fn unwritable_cache_dir_is_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let e = cached(&blocker.join("sub"));
    assert_eq!(e.component(Com, 3, -1).unwrap().dim(), 6);
}
