from .model import DeviceParams, DeviceState, VariationSpec, DeviceParameterError, ReadRangeError, get_device_preset, spawn_device, device_at_memristance, memristance, read_current, static_current, apply_pulse
from .sweep import SweepPoint, SweepResult, ComplianceError, quasi_dc_voltage_sweep, quasi_dc_current_sweep
