import pytest

from volvid.ingest import synthesize_field


@pytest.fixture(scope="session")
def synth_field_2488():
    return synthesize_field(seed=42, dims=(2, 4, 8, 8), blobs=3)


@pytest.fixture(scope="session")
def synth_field_small():
    # matches the container encode example: t=4, z=6, y=16, x=16
    return synthesize_field(seed=7, dims=(4, 6, 16, 16), blobs=4)
