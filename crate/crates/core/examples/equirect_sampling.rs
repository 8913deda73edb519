//! Direction/texture-coordinate round trips, bilinear lookup and yaw
//! rotation on an equirectangular map, plus a PFM round trip.

use std::f64::consts::PI;

use intrinsic_relight::{direction_to_uv, uv_to_direction, Direction, HdrEnvironmentMap, Rgb};

fn main() -> intrinsic_relight::Result<()> {
    for d in [
        Direction::FORWARD,
        Direction::UP,
        Direction::new(Rgb::new(1.0, 0.2, 0.3)).unwrap(),
    ] {
        let (u, v) = direction_to_uv(d);
        let back = uv_to_direction(u, v);
        println!(
            "{:>6.3?} -> uv ({u:.4}, {v:.4}) -> error {:.2e} rad",
            d.vec().to_array(),
            d.angle_to(back)
        );
    }

    // Radiance that only depends on azimuth makes rotation easy to see.
    let map = HdrEnvironmentMap::from_fn(64, 32, |d| {
        let phi = d.x().atan2(-d.z());
        Rgb::splat(1.0 + phi.cos())
    })?;
    let turned = map.rotate_yaw(PI / 2.0);
    let probe = Direction::new(Rgb::new(0.3, 0.1, -1.0)).unwrap();
    println!(
        "lookup {:.4}, rotated lookup at the yawed direction {:.4}",
        map.sample_bilinear(probe).x,
        turned.sample_bilinear(probe.yawed(PI / 2.0)).x
    );

    let bytes = map.to_pfm();
    let reread = HdrEnvironmentMap::from_pfm(&bytes)?;
    println!(
        "PFM round trip: {} bytes, max difference {}",
        bytes.len(),
        map.max_abs_diff(&reread)
    );
    Ok(())
}
