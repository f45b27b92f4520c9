from __future__ import annotations

from typing import Any, Dict

import numpy as np

from core.errors import DataError
from nn.network import Network, init_network, parameter_count

NETWORK_FORMAT_VERSION = 1


def network_to_document(net: Network) -> Dict[str, Any]:
    """Versioned JSON-ready document; parameters flat in W-then-b layer order.

    Floats are kept as Python floats, whose JSON repr round-trips exactly.
    """
    return {
        "format_version": NETWORK_FORMAT_VERSION,
        "layout": list(net.layout),
        "activations": list(net.activations),
        "seed": int(net.seed),
        "parameters": [float(v) for v in net.get_params()],
    }


def network_from_document(doc: Dict[str, Any]) -> Network:
    version = doc.get("format_version")
    if version != NETWORK_FORMAT_VERSION:
        raise DataError(f"unsupported network format_version {version!r}")
    try:
        layout = [int(n) for n in doc["layout"]]
        activations = [str(a) for a in doc["activations"]]
        seed = int(doc["seed"])
        params = np.asarray(doc["parameters"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"malformed network document: {e}") from None
    if params.shape != (parameter_count(layout),):
        raise DataError(
            f"network document holds {params.size} parameters, layout {layout} needs {parameter_count(layout)}"
        )
    net = init_network(layout, activations, seed)
    net.set_params(params)
    net.version = 0
    return net
