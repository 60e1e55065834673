//! Adams numbers `rho(n)` and the Ferus bound `p <= rho(n) - 1` on the
//! leaf dimension of a totally geodesic foliation of a sphere.
//!
//! ```sh
//! cargo run --example ferus_numbers
//! ```

use prflow::topology::{adams_rho, ferus_check, ferus_number};

fn main() {
    println!("{:>4} {:>6}", "n", "rho(n)");
    for n in [1u64, 2, 4, 8, 16, 32, 64, 96, 128] {
        println!("{n:>4} {:>6}", adams_rho(n).rho);
    }
    println!("{:>4} {:>4}", "l", "F(l)");
    for l in [2u64, 9, 10, 17, 40, 72, 136, 264] {
        println!("{l:>4} {:>4}", ferus_number(l));
    }
    // Hopf fibration S^3 -> S^2: one-dimensional leaves, n = 2.
    println!("p = 1, n = 2: {}", ferus_check(1, 2));
    // Odd codimension admits no such foliation.
    println!("p = 1, n = 3: {}", ferus_check(1, 3));
}
