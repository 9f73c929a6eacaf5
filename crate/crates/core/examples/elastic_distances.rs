//! The three elastic measures on a pair of shifted series, with and without
//! an early-abandon cutoff.

use proximity_forest::distance::{adtw, cdtw, direct_alignment, lcss, CostExponent};

fn main() {
    let s = [0.0, 0.0, 1.0, 2.0, 1.0, 0.0, 0.0, 0.0];
    let t = [0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 1.0, 0.0];
    let g = CostExponent::Two;

    println!("direct alignment        {:.4}", direct_alignment(&s, &t, g).unwrap());
    for w in [0, 1, 2, 7] {
        println!("cdtw  window {w}          {:.4}", cdtw(&s, &t, w, g, None).unwrap().unwrap());
    }
    // each warping step costs omega, so small penalties behave like DTW and
    // large ones like direct alignment
    for omega in [0.0, 0.1, 0.5, 10.0] {
        println!("adtw  omega {omega:<5}      {:.4}", adtw(&s, &t, omega, g, None).unwrap().unwrap());
    }
    for w in [0, 2] {
        println!("lcss  eps 0.5 window {w}  {:.4}", lcss(&s, &t, 0.5, w).unwrap());
    }

    for gamma in CostExponent::ALL {
        println!("dtw with |a-b|^{}       {:.4}", gamma.value(), cdtw(&s, &t, 7, gamma, None).unwrap().unwrap());
    }

    // a cutoff below the true distance abandons the computation
    let exact = adtw(&s, &t, 0.1, g, None).unwrap().unwrap();
    println!("cutoff {exact}: {:?}", adtw(&s, &t, 0.1, g, Some(exact)).unwrap());
    println!("cutoff {}: {:?}", exact / 2.0, adtw(&s, &t, 0.1, g, Some(exact / 2.0)).unwrap());
}
