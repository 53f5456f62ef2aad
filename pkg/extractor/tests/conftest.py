import cv2
import numpy as np
import pytest


def write_test_video(path, n_frames=60, fps=30, size=(64, 48)):
    """Synthetic clip with a per-frame gradient so frames are distinct."""
    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, size
    )
    assert writer.isOpened(), "MJPG writer unavailable"
    for i in range(n_frames):
        frame = np.full((size[1], size[0], 3), (i * 4) % 256, dtype=np.uint8)
        frame[:, :, 0] = i % 256
        writer.write(frame)
    writer.release()
    return path


@pytest.fixture
def clip_2s_30fps(tmp_path):
    return write_test_video(tmp_path / "clip.avi", n_frames=60, fps=30)
