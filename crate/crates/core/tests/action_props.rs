use std::cell::RefCell;
use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tlaction_core::action::ActionEngine;
use tlaction_core::graph::{distance, CayleyGraph};
use tlaction_core::groups::{builtin_group, BuiltinGroup};
use tlaction_core::{Fuel, Vertex};

// BS(1,2) vertices are drawn from the first names: its numbering is
// enumerated, and far stages need very long canonical words.
fn sample_range(name: BuiltinGroup) -> std::ops::Range<Vertex> {
    match name {
        BuiltinGroup::Bs12 => 0..20,
        _ => 0..200,
    }
}

const GROUPS: [BuiltinGroup; 4] = [BuiltinGroup::Z, BuiltinGroup::Z2, BuiltinGroup::Bs12, BuiltinGroup::FreeF2];

#[test]
fn action_axioms() {
    for name in GROUPS {
        let engine = RefCell::new(ActionEngine::for_builtin(name).unwrap());
        let mut runner = TestRunner::new(Config::with_cases(500));
        runner
            .run(&(sample_range(name), -20i64..=20, -20i64..=20), |(v, n, m)| {
                let mut e = engine.borrow_mut();
                let mut fuel = Fuel::default();
                prop_assert_eq!(e.act(v, 0, &mut fuel).unwrap(), v);
                let vn = e.act(v, n, &mut fuel).unwrap();
                let lhs = e.act(vn, m, &mut fuel).unwrap();
                prop_assert_eq!(lhs, e.act(v, n + m, &mut fuel).unwrap());
                Ok(())
            })
            .unwrap_or_else(|err| panic!("{name}: {err}"));
    }
}

#[test]
fn action_is_free() {
    for name in GROUPS {
        let engine = RefCell::new(ActionEngine::for_builtin(name).unwrap());
        let mut runner = TestRunner::new(Config::with_cases(300));
        runner
            .run(&(sample_range(name), -40i64..=40), |(v, n)| {
                prop_assume!(n != 0);
                prop_assert_ne!(engine.borrow_mut().act(v, n, &mut Fuel::default()).unwrap(), v);
                Ok(())
            })
            .unwrap_or_else(|err| panic!("{name}: {err}"));
    }
}

#[test]
fn z2_coverage_and_jump_bound() {
    let g = CayleyGraph::new(&builtin_group(BuiltinGroup::Z2).unwrap());
    let mut e = ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap();
    let mut fuel = Fuel::default();
    e.build_stage(200, &mut fuel).unwrap();
    let index = e.visited_index();
    let positions: BTreeSet<i64> = index.values().copied().collect();
    assert_eq!(positions.len(), index.len());
    assert!((0..=200).all(|v| index.contains_key(&v)));
    let path = e.current_path().unwrap();
    for w in path.vertices().windows(2) {
        assert!(distance(&g, w[0], w[1], 3).unwrap().is_some());
    }
    for i in 0..200 {
        let (small, big) = (e.build_stage(i, &mut fuel).unwrap(), e.build_stage(i + 1, &mut fuel).unwrap());
        assert!(big.extends(&small));
    }
}

#[test]
fn jumps_bounded_on_transitive_builtins() {
    for name in [BuiltinGroup::Z, BuiltinGroup::Z2, BuiltinGroup::Bs12] {
        let g = CayleyGraph::new(&builtin_group(name).unwrap());
        let mut e = ActionEngine::for_builtin(name).unwrap();
        let mut fuel = Fuel::default();
        for v in sample_range(name) {
            let w = e.act(v, 1, &mut fuel).unwrap();
            assert!(distance(&g, v, w, 3).unwrap().is_some(), "{name}: {v} -> {w}");
        }
    }
}
