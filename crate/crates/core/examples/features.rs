//! Touch and accelerometer features of one swipe.

use becaptcha::features::{accel_features, combine, touch_features, COLUMNS};
use becaptcha::fixture::{fixture_gesture, FixtureConfig};
use becaptcha::model::{TouchPoint, TouchTrajectory};

fn main() -> becaptcha::Result<()> {
    // a three-point detour: 0.6 apart, 1.0 travelled
    let traj = TouchTrajectory::new(
        vec![TouchPoint::new(0.0, 0.0, 0.0), TouchPoint::new(0.3, 0.4, 0.1), TouchPoint::new(0.6, 0.0, 0.3)],
        1080,
        1920,
    )?;
    let f = touch_features(&traj)?;
    println!("worked example: {f:?}");

    let g = fixture_gesture(7, 0, &FixtureConfig::default())?;
    let accel = g.accel.as_ref().map(accel_features).transpose()?;
    let all = combine(touch_features(&g.touch)?, accel);
    for (name, v) in COLUMNS.iter().zip(all.as_array()) {
        println!("{name:>18} {v:>12.5}");
    }
    Ok(())
}
