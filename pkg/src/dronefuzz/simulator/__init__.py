from .flightlog import FlightLog, LogEvent, Sample
from .mission import Mission
from .types import ControlInput, DroneSetup, FenceCheck, GeofenceConfig, VehicleState
from .world import DT, SIM_TIME_CAP, World, check_geofence, run_mission

__all__ = [
    "DT",
    "SIM_TIME_CAP",
    "ControlInput",
    "DroneSetup",
    "FenceCheck",
    "FlightLog",
    "GeofenceConfig",
    "LogEvent",
    "Mission",
    "Sample",
    "VehicleState",
    "World",
    "check_geofence",
    "run_mission",
]
