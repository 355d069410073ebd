#![no_main]

use anisogreen::volume::FieldVolume;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(volume) = FieldVolume::decode(data) {
        // Anything accepted must re-encode to the same bytes.
        assert_eq!(volume.encode(), data);
    }
});
