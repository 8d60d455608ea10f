use proptest::prelude::*;
use semicoarse::homotopy::{homotopy_to_dmoves, replay_moves, step_ok};
use semicoarse::io::{StringDesc, ZMapDesc};
use semicoarse::random::{random_graph, random_homotopy, random_rewrite, random_string, random_walk, rng};
use semicoarse::strings::{normalize, StringOfMaps};
use semicoarse::{Space, ZMap};
use std::sync::Arc;

fn small_space(seed: u64, n: usize) -> Arc<Space> {
    Arc::new(Space::Finite(random_graph(&mut rng(seed), n)))
}

fn sample_string(seed: u64, n: usize) -> StringOfMaps {
    let space = small_space(seed, n);
    random_string(&mut rng(seed ^ 0x5eed), &space, 0, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_maps_roundtrip_through_json(seed in any::<u64>(), n in 1usize..=6, len in 1usize..=8, lo in -5i64..=5) {
        let space = small_space(seed, n);
        let p = random_walk(&mut rng(seed), space.finite().unwrap(), 0, len);
        let f = ZMap::from_path(space.clone(), lo, &p).unwrap();
        let text = serde_json::to_string(&ZMapDesc::of(&f, true)).unwrap();
        let back = serde_json::from_str::<ZMapDesc>(&text).unwrap().build(None).unwrap();
        prop_assert_eq!(&back, &f);
        for (i, &v) in p.iter().enumerate() {
            prop_assert_eq!(f.eval(lo + i as i64), v);
        }
    }

    #[test]
    fn shift_and_reverse_are_invertible(seed in any::<u64>(), n in 1usize..=6, k in -9i64..=9) {
        let space = small_space(seed, n);
        let p = random_walk(&mut rng(seed), space.finite().unwrap(), 0, 6);
        let f = ZMap::from_path(space, 0, &p).unwrap();
        prop_assert_eq!(&f.shift(k).shift(-k), &f);
        prop_assert_eq!(&f.reverse().reverse(), &f);
        for z in -10..10 {
            prop_assert_eq!(f.reverse().eval(z), f.eval(-z));
            prop_assert_eq!(f.shift(k).eval(z + k), f.eval(z));
        }
    }

    #[test]
    fn strings_roundtrip_and_star_validates(seed in any::<u64>(), n in 1usize..=6) {
        let s = sample_string(seed, n);
        s.validate().unwrap();
        let text = serde_json::to_string(&StringDesc::of(&s, true)).unwrap();
        let back = serde_json::from_str::<StringDesc>(&text).unwrap().build(None).unwrap();
        prop_assert!(back.same_maps(&s));
        let loop_ = s.star(&s.reverse()).unwrap();
        loop_.validate().unwrap();
        prop_assert_eq!(loop_.len(), 2 * s.len());
    }

    #[test]
    fn normal_form_is_idempotent_and_replays(seed in any::<u64>(), n in 1usize..=6) {
        let s = sample_string(seed, n);
        let nf = normalize(&s);
        prop_assert!(nf.trace.replay(&s).unwrap().same_maps(&nf.string));
        let again = normalize(&nf.string);
        prop_assert!(again.string.same_maps(&nf.string));
        prop_assert!(again.trace.is_empty());
    }

    #[test]
    fn rewrite_steps_have_inverses(seed in any::<u64>(), n in 1usize..=6) {
        let s = sample_string(seed, n);
        if let Some((step, next)) = random_rewrite(&mut rng(seed), &s) {
            next.validate().unwrap();
            let back = next.apply(&s.inverse_step(&step).unwrap()).unwrap();
            prop_assert!(back.same_maps(&s), "{step}");
        }
    }

    #[test]
    fn homotopies_translate_to_point_moves(seed in any::<u64>(), n in 1usize..=6, len in 2usize..=8, rows in 1usize..=6) {
        let space = small_space(seed, n);
        let h = random_homotopy(&mut rng(seed), &space, len, rows);
        for w in h.windows(2) {
            prop_assert!(step_ok(&space, &w[0], &w[1]).unwrap());
        }
        let f = ZMap::from_path(space.clone(), 0, &h[0]).unwrap();
        let g = ZMap::from_path(space.clone(), 0, h.last().unwrap()).unwrap();
        let moves = homotopy_to_dmoves(&f, &g, 0, &h).unwrap();
        prop_assert_eq!(replay_moves(&f, &moves).unwrap(), g);
    }
}
