mod common;

use common::game_check::check_instance;
use common::region_oracle::Oracle;
use tiotest_core::fixtures::conveyor_dp;
use tiotest_core::game::*;
use tiotest_core::model::build_tester;

#[test]
fn random_instances_match_region_oracle() {
    for seed in 1000..1040 {
        check_instance(seed).unwrap();
    }
}

#[test]
fn conveyor_hierarchy_matches_region_oracle() {
    let t = build_tester(&conveyor_dp()).unwrap();
    let g = GameView::new(&t);
    let o = Oracle::new(2, g.max_constant(), g.locations());
    let h = build_hierarchy(&g);
    let oh = o.hierarchy(&g);
    assert_eq!(h.levels.len(), oh.len());
    for (lv, olv) in h.levels.iter().zip(&oh) {
        let got: Vec<_> = lv.iter().map(|w| o.of_states(w).unwrap()).collect();
        assert_eq!(&got, olv);
    }
}
