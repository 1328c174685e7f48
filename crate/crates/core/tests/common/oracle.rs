//! Direct-loop recomputation of the first-layer activation statistics.
#![allow(dead_code)]

use kdwb::datasets::Dataset;
use kdwb::Network;

/// First-conv activations and both statistics by direct loops in f64.
pub fn brute_profile(net: &Network, ds: &Dataset) -> (f64, f64) {
    let params = net.param_tensors();
    let (weight, bias) = (params[0], params[1]);
    let [co, ci, kh, kw] = weight.shape().try_into().unwrap();
    let s = ds.shape();
    let (ph, pw) = ((kh - 1) / 2, (kw - 1) / 2);
    let mut acts = vec![Vec::new(); co];
    for i in 0..ds.len() {
        let img = ds.image(i);
        for o in 0..co {
            for y in 0..s.h {
                for x in 0..s.w {
                    let mut v = f64::from(bias.data()[o]);
                    for c in 0..ci {
                        for dy in 0..kh {
                            for dx in 0..kw {
                                let (yy, xx) = (y as isize + dy as isize - ph as isize, x as isize + dx as isize - pw as isize);
                                if yy >= 0 && xx >= 0 && (yy as usize) < s.h && (xx as usize) < s.w {
                                    let wv = weight.data()[((o * ci + c) * kh + dy) * kw + dx];
                                    let xv = img[(c * s.h + yy as usize) * s.w + xx as usize];
                                    v += f64::from(wv) * f64::from(xv);
                                }
                            }
                        }
                    }
                    acts[o].push(v.max(0.0));
                }
            }
        }
    }
    let total: usize = acts.iter().map(Vec::len).sum();
    let mean = acts.iter().flatten().sum::<f64>() / total as f64;
    let stds: Vec<f64> = acts
        .iter()
        .map(|a| {
            let m = a.iter().sum::<f64>() / a.len() as f64;
            (a.iter().map(|v| (v - m).powi(2)).sum::<f64>() / a.len() as f64).sqrt()
        })
        .collect();
    (mean, stds.iter().sum::<f64>() / co as f64)
}
