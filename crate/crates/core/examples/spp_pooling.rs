//! Spatial pyramid pooling maps any input size to the same vector length;
//! the gradient flows back only to each bin's maximum.
//!
//! ```text
//! cargo run --example spp_pooling
//! ```

use robnet::tensor::{pyramid_width, Tape, Tensor};

fn main() -> robnet::Result<()> {
    let levels = [1, 2, 4];
    let channels = 3;
    println!("pyramid {levels:?} over {channels} channels: {} outputs", pyramid_width(&levels, channels));
    for (h, w) in [(1, 1), (5, 7), (31, 31), (300, 120)] {
        let data: Vec<f32> = (0..channels * h * w).map(|i| ((i * 37) % 101) as f32).collect();
        let mut tape = Tape::new();
        let x = tape.param(Tensor::new(&[1, channels, h, w], data)?);
        let y = tape.spp(x, &levels)?;
        let total = tape.sum(y);
        tape.backward(total)?;
        let routed = tape.grad(x).expect("tracked").iter().filter(|&&g| g != 0.0).count();
        println!(
            "{h:3}x{w:<3} -> {:?}; gradient reaches {routed} of {} inputs",
            tape.value(y).shape(),
            channels * h * w
        );
    }
    Ok(())
}
