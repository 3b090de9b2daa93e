//! Exact continuum Laplacian spectra of the elementary shapes, computed
//! from Bessel and spherical-Bessel zeros and separable sums.

use declap::exact::{
    ball_spectrum, bessel_zeros, box_spectrum, disk_spectrum, shell_spectrum, ExactBc,
};

fn show(label: &str, values: &[f64]) {
    let pretty: Vec<String> = values.iter().map(|v| format!("{v:8.4}")).collect();
    println!("{label:<26} {}", pretty.join(" "));
}

fn main() {
    println!("first zeros of J_0: {:?}", bessel_zeros(0, 3));
    println!();
    for bc in [ExactBc::Dirichlet, ExactBc::Neumann] {
        println!("{bc:?}:");
        show("  unit disk", &disk_spectrum(1.0, bc, 6).unwrap());
        show("  unit square", &box_spectrum(&[1.0, 1.0], bc, 6).unwrap());
        show("  unit ball", &ball_spectrum(1.0, bc, 6).unwrap());
        show("  unit cube", &box_spectrum(&[1.0, 1.0, 1.0], bc, 6).unwrap());
        show("  shell (0.5, 1)", &shell_spectrum(1.0, 0.5, bc, 6).unwrap());
        println!();
    }
    let shell = shell_spectrum(1.0, 0.5, ExactBc::Dirichlet, 1).unwrap();
    println!(
        "shell width 1/2 sanity check: first Dirichlet eigenvalue {:.6} = 4 pi^2",
        shell[0]
    );
}
