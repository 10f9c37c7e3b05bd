//! Reference values from an independent 50-digit implementation
//! (`tests/oracle/dispersion_oracle.py`), frozen here.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use swtl_core::dispersion::{dipole_factor_f, ellipsoid_factor_g, k_of_omega, omega_of_k, FieldPoint, KBracket};
use swtl_core::phase_shifter::{calibrate_field, phase_shift, OperatingPoint, ShifterSpec};
use swtl_core::{Error, MaterialStack};

fn stack() -> MaterialStack {
    MaterialStack::preset("cofeb-paper").unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn g_factor_matches_reference() {
    let s = stack();
    let k_tot = 5e7f64.powi(2) + s.transverse_k_sq();
    let g = ellipsoid_factor_g(k_tot, s.waveguide_thickness).unwrap();
    assert!(rel(g, 0.202_751_584_303_222_416_57) < 1e-12, "{g}");
}

#[test]
fn f_factor_off_axis_matches_reference() {
    let s = stack();
    let k_tot = 5e7f64.powi(2) + s.transverse_k_sq();
    let g = ellipsoid_factor_g(k_tot, s.waveguide_thickness).unwrap();
    let omega_h = FieldPoint(0.01).omega_h(&s);
    let f = dipole_factor_f(k_tot, g, omega_h, s.omega_m(), s.exchange_length_sq(), PI / 4.0, 0.0).unwrap();
    assert!(rel(f, 2.521_132_097_208_275_853_5) < 1e-11, "{f}");
}

const FREQ_TABLE: &[(f64, f64, Option<f64>)] = &[
    (1e7, -0.01, None),
    (1e7, 0.0, Some(3_432_215_415.029_322_705_6)),
    (1e7, 0.0147, Some(5_506_111_251.262_252_198_3)),
    (1e7, 0.1, Some(12_023_981_284.652_858_2)),
    (5e7, -0.01, Some(8_541_594_535.924_997_401)),
    (5e7, 0.0, Some(9_205_983_375.378_249_000_4)),
    (5e7, 0.0147, Some(10_117_718_217.243_657_074)),
    (5e7, 0.1, Some(14_535_955_439.223_761_897)),
    (1.8e8, -0.01, Some(34_592_771_092.905_912_449)),
    (1.8e8, 0.0, Some(34_888_664_240.405_317_133)),
    (1.8e8, 0.0147, Some(35_323_160_004.611_859_853)),
    (1.8e8, 0.1, Some(37_834_384_389.370_255_802)),
    (5e8, -0.01, Some(196_643_878_946.955_240_04)),
    (5e8, 0.0, Some(196_924_091_604.031_957_4)),
    (5e8, 0.0147, Some(197_336_003_694.667_560_78)),
    (5e8, 0.1, Some(199_726_202_751.327_529_17)),
];

#[test]
fn frequency_grid_matches_reference() {
    let s = stack();
    for &(k, b, expected) in FREQ_TABLE {
        let got = omega_of_k(k, FieldPoint(b), &s);
        match expected {
            Some(f_hz) => {
                let f = got.unwrap() / (2.0 * PI);
                assert!(rel(f, f_hz) < 1e-12, "k={k} B={b}: {f} vs {f_hz}");
            }
            None => assert!(matches!(got, Err(Error::Evanescent { .. })), "k={k} B={b}: {got:?}"),
        }
    }
}

#[test]
fn wavenumbers_match_reference() {
    let s = stack();
    for (f, k_ref) in [
        (30e9, 160_476_106.175_648_669_79),
        (35e9, 180_422_701.933_819_073_54),
        (40e9, 198_536_222.070_067_675_85),
    ] {
        let k = k_of_omega(f, FieldPoint::ZERO, &s, &KBracket::default()).unwrap();
        assert!(rel(k, k_ref) < 1e-11, "f={f}: {k} vs {k_ref}");
    }
}

fn op35() -> OperatingPoint {
    OperatingPoint::new(stack(), 35e9, FieldPoint::ZERO)
}

#[test]
fn phase_shifts_match_reference() {
    let up = phase_shift(&ShifterSpec::new(100e-9, 0.0147), &op35()).unwrap();
    let down = phase_shift(&ShifterSpec::new(100e-9, -0.0147), &op35()).unwrap();
    assert!((up - 9.494_379_666_293_062_267_6).abs() < 1e-8, "{up}");
    assert!((down + 9.392_845_307_959_217_376).abs() < 1e-8, "{down}");
}

#[test]
fn unit_field_matches_reference() {
    let b = calibrate_field(10.0, 100e-9, &op35(), 0.5).unwrap();
    assert!(rel(b, 0.015_478_362_792_276_646_97) < 1e-8, "{b}");
}
