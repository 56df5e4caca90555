use proptest::prelude::*;
use tlaction_core::groups::{BuiltinGroup, Word};
use tlaction_core::stallings::{builtin_splitting, z_subgroup_membership, Splitting};
use tlaction_core::Fuel;

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..=12).prop_map(|v| Word::from_signed(&v))
}

// w = c^n for some |n| <= |w|, judged by the ambient word problem alone
fn brute_force_member(s: &Splitting, w: &Word) -> bool {
    let c = s.cyclic_generator();
    let bound = w.len() as i64;
    (-bound..=bound).any(|n| s.group().equal(w, &c.pow(n)))
}

fn check(name: BuiltinGroup, w: &Word) -> Result<(), TestCaseError> {
    let s = builtin_splitting(name).unwrap();
    let mut fuel = Fuel::default();
    let nf = s.normal_form(w, &mut fuel).unwrap();
    let p = s.product(&nf).unwrap();
    prop_assert!(s.group().equal(&p, w));
    prop_assert!(s.is_normal(&nf).unwrap());
    prop_assert_eq!(&s.normal_form(&p, &mut fuel).unwrap(), &nf);
    prop_assert_eq!(z_subgroup_membership(&s, w, &mut fuel).unwrap(), brute_force_member(&s, w));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hnn_normal_forms(w in word()) {
        check(BuiltinGroup::Z2Hnn, &w)?;
    }

    #[test]
    fn amalgam_normal_forms(w in word()) {
        check(BuiltinGroup::Z2StarZ3, &w)?;
    }

    #[test]
    fn free_group_normal_forms(w in word()) {
        check(BuiltinGroup::FreeF2, &w)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cyclic_powers_are_members(n in -15i64..=15, conj in word()) {
        for name in [BuiltinGroup::Z2Hnn, BuiltinGroup::Z2StarZ3, BuiltinGroup::FreeF2] {
            let s = builtin_splitting(name).unwrap();
            let mut fuel = Fuel::default();
            let c = s.cyclic_generator();
            prop_assert_eq!(s.cyclic_power(&c.pow(n), &mut fuel).unwrap(), Some(n));
            let g = conj.concat(&c.pow(n)).concat(&conj.inverse());
            prop_assert_eq!(z_subgroup_membership(&s, &g, &mut fuel).unwrap(), brute_force_member(&s, &g));
        }
    }
}
