use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tlaction_core::action::ActionEngine;
use tlaction_core::graph::{ball_with_fuel, CayleyGraph};
use tlaction_core::groups::{builtin_group, BuiltinGroup, Word};
use tlaction_core::subshift::{period3_forbidden, phi_map, x_star_ball, xj_forbidden, yxj_forbidden, ArrowLetter, PatternPatch, SemiVerdict, Shape};
use tlaction_core::verify::psi_period3;
use tlaction_core::{Fuel, Vertex};

fn z2() -> CayleyGraph {
    CayleyGraph::new(&builtin_group(BuiltinGroup::Z2).unwrap())
}

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(Shape::ALL.to_vec())
}

#[test]
fn x_star_balls_are_allowed() {
    let g = z2();
    let engine = RefCell::new(ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap());
    TestRunner::new(Config::with_cases(50))
        .run(&(0 as Vertex..300, 0usize..=3), |(c, r)| {
            let mut fuel = Fuel::unlimited();
            let p = x_star_ball(&g, &mut engine.borrow_mut(), c, r, 3, &mut fuel).unwrap();
            prop_assert!(!xj_forbidden(&g, 3, &p, &mut fuel).unwrap());
            Ok(())
        })
        .unwrap();
}

#[test]
fn fixed_points_and_incoherence_are_forbidden() {
    let g = z2();
    let mut fuel = Fuel::unlimited();
    let ball1: Vec<Vertex> = ball_with_fuel(&g, 0, 1, &mut fuel).unwrap().vertices().collect();
    TestRunner::new(Config::with_cases(100))
        .run(&(prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..4), 0usize..4), |(signed, k)| {
            let l = Word::from_signed(&signed);
            prop_assume!(g.word(g.vertex(&l).unwrap()).unwrap().len() <= 3);
            // a fixed point at the identity, whatever the incoming arrow
            let p = PatternPatch { values: BTreeMap::from([(0, ArrowLetter::new(&g, &l, &Word::empty(), 3).unwrap())]) };
            prop_assert!(xj_forbidden(&g, 3, &p, &mut Fuel::unlimited()).unwrap());
            // the identity points to a neighbour that does not point back
            let h = ball1[1 + k];
            let x = g.word(h).unwrap();
            let mut values: BTreeMap<Vertex, ArrowLetter> = ball1.iter().map(|&v| (v, ArrowLetter::new(&g, &x.inverse(), &x, 3).unwrap())).collect();
            values.insert(h, ArrowLetter::new(&g, &x, &x, 3).unwrap());
            let incoherent = PatternPatch { values };
            prop_assert!(xj_forbidden(&g, 3, &incoherent, &mut Fuel::unlimited()).unwrap());
            Ok(())
        })
        .unwrap();
}

#[test]
fn psi_patterns_are_not_found_forbidden() {
    let g = z2();
    let engine = RefCell::new(ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap());
    TestRunner::new(Config::with_cases(30))
        .run(&(0usize..=3, shape()), |(r, s)| {
            let mut fuel = Fuel::unlimited();
            let region = ball_with_fuel(&g, 0, r, &mut fuel).unwrap().vertex_set();
            let (_, p) = psi_period3(&g, &mut engine.borrow_mut(), s, &region, 3, &mut fuel).unwrap();
            prop_assert_eq!(yxj_forbidden(&g, 3, &period3_forbidden, &p, 10_000, &mut fuel).unwrap(), SemiVerdict::FalseSoFar);
            Ok(())
        })
        .unwrap();
}

#[test]
fn phi_inverts_psi_on_random_regions() {
    let g = z2();
    let engine = RefCell::new(ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap());
    TestRunner::new(Config::with_cases(100))
        .run(&(prop::collection::btree_set(0 as Vertex..120, 0..60), shape()), |(mut region, s)| {
            region.insert(0);
            let region: BTreeSet<Vertex> = region;
            let mut fuel = Fuel::unlimited();
            let (z, p) = psi_period3(&g, &mut engine.borrow_mut(), s, &region, 3, &mut fuel).unwrap();
            let y = phi_map(&g, &p).unwrap();
            prop_assert_eq!(y.get(0), Some(&s));
            for n in y.start..=y.end() {
                prop_assert_eq!(y.get(n), z.get(n));
            }
            Ok(())
        })
        .unwrap();
}
