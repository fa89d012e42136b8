use cfclock_core::synth::{synth_um_general, SynthRequest};

fn main() {
    let mut worst = (0.0f64, 0u32, 0u64);
    for nt in 1..=5u32 {
        for seed in 0..10u64 {
            let r = 0.3 + 0.27 * seed as f64;
            let req = SynthRequest::random(nt, if seed % 2 == 0 { r } else { -r }, seed * 31 + nt as u64);
            match synth_um_general(&req) {
                Ok((spec, _)) => {
                    let res = spec.um().unitarity_residual();
                    if res > worst.0 { worst = (res, nt, seed); }
                }
                Err(e) => println!("nt={nt} seed={seed}: ERROR {e}"),
            }
        }
    }
    println!("worst residual {:.3e} at nt={} seed={}", worst.0, worst.1, worst.2);
}
