use std::sync::Arc;

use symdyn::epitomes::{
    border_epitome_consistency, epitome_property_check, profile, simple_pattern_census, verify_enforcer,
    ConstantFamily, IdentityFamily, InteriorCountFamily, MirrorFamily, Profile, ProfileFamily, Projection,
    WindowSource,
};
use symdyn::lowcfg::NNSpec;
use symdyn::pattern::all_patterns;
use symdyn::shift::{FiniteSpec, MirrorSpec, RedBlackSpec};
use symdyn::{Alphabet, ShiftSpec};

#[test]
fn census_matches_direct_count() {
    let a = Alphabet::black_white_red();
    for n in 1..=3 {
        let direct = all_patterns(&a, n, n).filter(|p| profile(p).is_some()).count() as u64;
        assert_eq!(simple_pattern_census(n).unwrap(), direct);
        assert_eq!(direct, ((n + 1) as u64).pow(n as u32));
    }
}

#[test]
fn enforcers_characterize_down_sets() {
    let spec = RedBlackSpec::default();
    for n in 2..=3 {
        for prof in Profile::all(n) {
            let r = verify_enforcer(&prof, &spec).unwrap();
            assert!(r.pass, "{prof}: {r:?}");
        }
    }
}

#[test]
fn property_checks() {
    let rb = RedBlackSpec::default();
    assert!(
        epitome_property_check(&rb, &ProfileFamily, 2, WindowSource::Enforcer)
            .unwrap()
            .pass
    );
    let m = epitome_property_check(&MirrorSpec::default(), &MirrorFamily, 2, WindowSource::Mirror).unwrap();
    assert!(m.pass);
    assert_eq!(m.holding, 16);
    let bad = epitome_property_check(&rb, &IdentityFamily, 1, WindowSource::Annulus { margin: 1 }).unwrap();
    assert!(!bad.pass);
    assert!(bad.failures.iter().all(|c| c.window.is_some() && c.other.is_some()));
}

#[test]
fn border_grouping_on_hard_square() {
    let hs: Arc<dyn ShiftSpec> = Arc::new(FiniteSpec::hard_square());
    let cover = NNSpec::new(hs.clone()).unwrap();
    let id = Projection::identity(hs.alphabet());
    let constant = border_epitome_consistency(&cover, &id, &ConstantFamily, 3, 0).unwrap();
    assert!(constant.pass);
    assert_eq!(constant.border_bits, 8);
    let count = border_epitome_consistency(&cover, &id, &InteriorCountFamily { letter: 1 }, 3, 0).unwrap();
    assert!(!count.conflicts.is_empty());
    assert_eq!(count.rings, constant.rings);
}
