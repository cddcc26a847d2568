#!/usr/bin/env python3
"""Regenerates the shipped scenario files.

Both scenarios describe a liquid-cooled GPU hall as UDCP transactions plus
structural attribute seeds. Loop flows are sized from the heat balance
Q = m_dot * cp * dT so the steady-state delta-T at the design load comes out
at the chosen setpoint.

Usage: python3 scenarios/generate.py  (writes *.json next to this script)
"""

import json
import pathlib

CP_J_PER_KG_K = 4186.0
RACK_NOMINAL_KW = 46.8  # 8 servers x 8 GPUs x 700 W, +4.5% overhead


def flow_lpm(heat_kw: float, delta_t_k: float) -> float:
    """Coolant flow that removes heat_kw at delta_t_k (water, 1 kg/L)."""
    return heat_kw * 1000.0 * 60.0 / (CP_J_PER_KG_K * delta_t_k)


def endpoint(device_id, ru, view, path, port):
    return {
        "device_id": device_id,
        "elevation_ru": ru,
        "view": view,
        "path": path,
        "port": port,
    }


def rack(device_id, hall, row, position):
    return {
        "device_id": device_id,
        "device_type": "Rack",
        "location": {"hall": hall, "row": row, "position": position},
        "panels": [
            {"panel_id": "pwr", "elevation_ru": 42, "view": "rear",
             "port_count": 4, "port_type": "C19"},
            {"panel_id": "mgmt", "elevation_ru": 1, "view": "front",
             "port_count": 8, "port_type": "RJ45"},
        ],
    }


def pdu(device_id, hall):
    return {
        "device_id": device_id,
        "device_type": "PDU",
        "location": {"hall": hall, "row": "power", "position": device_id},
        "panels": [
            {"panel_id": "out", "elevation_ru": 1, "view": "front",
             "port_count": 48, "port_type": "C20"},
        ],
    }


def coolant_loop(device_id, hall):
    return {
        "device_id": device_id,
        "device_type": "CoolantLoop",
        "location": {"hall": hall, "row": "mech", "position": device_id},
        "panels": [
            {"panel_id": "taps", "elevation_ru": 1, "view": "front",
             "port_count": 16, "port_type": "QDC"},
        ],
    }


def pump(device_id, hall):
    return {
        "device_id": device_id,
        "device_type": "Pump",
        "location": {"hall": hall, "row": "mech", "position": device_id},
        "panels": [
            {"panel_id": "ctl", "elevation_ru": 1, "view": "front",
             "port_count": 2, "port_type": "M12"},
        ],
    }


def build_hall(hall, n_loops, racks_per_loop, pump_ids, pump_kw,
               loop_flow_lpm):
    """One UDCP create transaction plus the structural attribute seeds."""
    devices = [pdu("PDU-A", hall), pdu("PDU-B", hall)]
    connections = []
    attributes = []

    loops = [f"L-{i + 1}" for i in range(n_loops)]
    for loop_id in loops:
        devices.append(coolant_loop(loop_id, hall))
        attributes.append({
            "node_id": loop_id,
            "structural": {"flow_lpm": round(loop_flow_lpm, 3)},
        })

    for loop_id, pump_id in zip(loops, pump_ids):
        devices.append(pump(pump_id, hall))
        attributes.append({
            "node_id": pump_id,
            "structural": {
                "pump_power_kw": pump_kw,
                "vibration_nominal": 2.0,
                "vibration_max": 5.0,
            },
        })
        connections.append({
            "a": endpoint(pump_id, 1, "front", "A", 1),
            "b": endpoint(loop_id, 1, "front", "A", 10),
            "media": {"kind": "control"},
            "label": f"{pump_id} drives {loop_id}",
        })

    rack_no = 0
    for li, loop_id in enumerate(loops):
        for slot in range(racks_per_loop):
            rack_no += 1
            rack_id = f"R-{rack_no:02d}"
            devices.append(rack(rack_id, hall, f"row-{li + 1}", f"{slot + 1:02d}"))
            # Redundant A/B power feeds; one tap into the rack's coolant loop.
            connections.append({
                "a": endpoint(rack_id, 42, "rear", "A", 1),
                "b": endpoint("PDU-A", 1, "front", "A", rack_no),
                "media": {"kind": "power"},
            })
            connections.append({
                "a": endpoint(rack_id, 42, "rear", "B", 2),
                "b": endpoint("PDU-B", 1, "front", "B", rack_no),
                "media": {"kind": "power"},
            })
            connections.append({
                "a": endpoint(rack_id, 1, "front", "A", 1),
                "b": endpoint(loop_id, 1, "front", "A", slot + 1),
                "media": {"kind": "control"},
                "label": f"{rack_id} cold plate on {loop_id}",
            })

    transaction = {
        "command": "create",
        "transaction_id": f"{hall}-asdesigned",
        "devices": devices,
        "connections": connections,
    }
    return transaction, attributes


def pump_failure():
    # Four loops of four racks. Flow is sized for a 10.5 K delta-T at full
    # load, safely under the 15 K anomaly threshold. At tick 300 pump P-7
    # (loop L-4) degrades: 30% flow plus heavy vibration. The delta-T rule
    # then trips, causal inference lands on the pump, and load redistribution
    # keeps every loop below the threshold and every rack below 45 C.
    racks_per_loop = 4
    loop_heat_kw = RACK_NOMINAL_KW * racks_per_loop
    topology, attributes = build_hall(
        hall="H1", n_loops=4, racks_per_loop=racks_per_loop,
        pump_ids=["P-2", "P-4", "P-6", "P-7"], pump_kw=5.0,
        loop_flow_lpm=flow_lpm(loop_heat_kw, 10.5))
    return {
        "name": "pump-failure",
        "duration_ticks": 600,
        "tick_s": 1.0,
        "seed": 42,
        "topology": [topology],
        "attributes": attributes,
        "workload": {"kind": "constant", "low": 100.0, "high": 100.0, "period": 60},
        "faults": [
            {"tick": 300, "node_id": "P-7",
             "effect": {"flow_scale": 0.3, "vibration": 9.0}},
        ],
        "config": {
            "rack_nominal_kw": RACK_NOMINAL_KW,
            "overhead_frac": 0.10,
            "redistribution_kw": 180.0,
            "carbon_kg_per_kwh": 0.36,
            "controller_enabled": True,
        },
    }


def case_study_hall():
    # Sixteen racks on two loops at a steady 95% utilization; desk-scale
    # stand-in for a production hall. Flow sized for a 10 K delta-T at the
    # operating point, so the run stays anomaly-free.
    racks_per_loop = 8
    loop_heat_kw = RACK_NOMINAL_KW * (0.30 + 0.70 * 0.95) * racks_per_loop
    topology, attributes = build_hall(
        hall="H7", n_loops=2, racks_per_loop=racks_per_loop,
        pump_ids=["P-1", "P-2"], pump_kw=10.0,
        loop_flow_lpm=flow_lpm(loop_heat_kw, 10.0))
    return {
        "name": "case-study-hall",
        "duration_ticks": 10000,
        "tick_s": 1.0,
        "seed": 7,
        "topology": [topology],
        "attributes": attributes,
        "workload": {"kind": "constant", "low": 95.0, "high": 95.0, "period": 60},
        "faults": [],
        "config": {
            "rack_nominal_kw": RACK_NOMINAL_KW,
            "overhead_frac": 0.10,
            "carbon_kg_per_kwh": 0.36,
            "controller_enabled": True,
        },
    }


def main():
    here = pathlib.Path(__file__).resolve().parent
    for scenario in (pump_failure(), case_study_hall()):
        path = here / f"{scenario['name']}.json"
        path.write_text(json.dumps(scenario, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
