"""Human-interaction fuzz testing for simulated small uncrewed aircraft.

The pipeline, end to end:

1. ``model``     -- the declared fuzz space (roles, devices, drones, modes,
                    lifecycle states, throttle positions, geofence settings,
                    wind, missions, task templates) and the test document
                    format, with parsing and static validation.
2. ``fuzzer``    -- exhaustive scenario enumeration, seeded random sampling,
                    and timing fuzz over the declared space.
3. ``simulator`` -- a deterministic discrete-time flight controller and
                    vehicle surrogate: modes, lifecycle states, geofence
                    failsafes, throttle and stick semantics, wind, and an
                    irreversible kill switch.
4. ``runner``    -- executes tests against the simulator: watches for each
                    interaction task's precondition, dispatches it to a proxy
                    agent or a live operator session, and records the flight.
5. ``oracle``    -- flight-log assessment: deviation from a blueprint run,
                    feature extraction, and Nominal/Abnormal labeling.
6. ``gateway``   -- downselection (k-means, elbow heuristic, percentile
                    picking) and the mitigation ledger with its
                    field-readiness gate.
7. ``service``   -- the live-session protocol and server that bridge the
                    runner to an operator console.

``cli`` ties the pieces into pipeline subcommands.
"""

__version__ = "0.1.0"
