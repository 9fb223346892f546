//! Turns raw device captures into gestures and scores their features.

use becaptcha::capture::{ingest_capture, read_captures};
use becaptcha::features::touch_features;
use becaptcha::model::{Label, Source};

const CAPTURES: &str = r#"{"screen_w":1080,"screen_h":1920,"touch":[[200,1600,0.4,1000],[420,1560,null,1016],[700,1510,null,1032],[860,1490,null,1048]],"accel":[[0.1,6.2,7.4,995],[0.1,6.3,7.4,1000],[0.2,6.3,7.5,1005],[0.1,6.2,7.4,1010],[0.1,6.2,7.3,1015]],"subject_id":"u01"}
{"screen_w":720,"screen_h":1280,"touch":[[100,1000,null,0],[300,990,null,20],[500,1000,null,40]],"orientation":"landscape","subject_id":"u02"}
"#;

fn main() -> becaptcha::Result<()> {
    for cap in read_captures(CAPTURES.as_bytes())? {
        let g = ingest_capture(&cap, Label::Human, Source::Recorded)?;
        let f = touch_features(&g.touch)?;
        let accel = g.accel.as_ref().map_or("none".to_string(), |a| format!("{} samples at {:.0} Hz", a.len(), a.rate_hz()));
        println!("{:?}: {} points, {:.3} s, efficiency {:.4}, accel {accel}", g.meta.orientation, g.touch.len(), f.duration_s, f.move_efficiency);
    }
    Ok(())
}
