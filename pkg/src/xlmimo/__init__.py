"""Near-field XL-MIMO channel modeling and degrees-of-freedom analysis."""
from .channels import (ChannelMatrix, HybridSpec, Path, ScatteringSpectrum, hybrid_channel,
                       los_channel_dyadic, los_channel_scalar, nlos_array_response,
                       nlos_fourier_planewave)
from .em import (FieldRegion, WaveParams, classify_region, dyadic_green, rayleigh_distance,
                 response_model, scalar_green)
from .geometry import (ArrayGeometry, SurfaceSpec, build_ula, build_upa, cap_as_dense_upa,
                       rotate_surface)
from .metrics import EdofReport, capacity_waterfilling, dof_approx, dof_rank, edof
from .precoding import Precoder, zf_exact, zf_neumann

__version__ = "0.1.0"
