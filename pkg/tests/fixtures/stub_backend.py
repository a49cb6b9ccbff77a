#!/usr/bin/env python3
"""Loopback backend for protocol tests.

Speaks the line-delimited JSON protocol and returns a canned prediction.
Magic prompts make it misbehave on purpose:

  GARBAGE    reply with non-JSON text
  EXTRA_CELL reply whose effects row has five entries
  BAD_PROBS  reply whose type probabilities sum to 2
  SILENCE    never reply (forces a timeout)
  DIE        exit immediately without replying
"""

import json
import sys

CANNED = {
    "type_probs": [0.05, 0.05, 0.05, 0.8, 0.05],
    "statuses": [1.0, 2.0, 3.0, 0.5],
    "effects": [[0, -1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
}


def main() -> None:
    for line in sys.stdin:
        message = json.loads(line)
        op = message.get("op")
        if op == "hello":
            print(json.dumps({"op": "hello", "model_id": "stub-backend-1"}), flush=True)
        elif op == "predict":
            prompt = message.get("prompt", "")
            if prompt == "GARBAGE":
                print("this is not json", flush=True)
            elif prompt == "EXTRA_CELL":
                reply = dict(CANNED)
                reply["effects"] = [[0, -1, 0, 0, 1]] + [[0, 0, 0, 0]] * 3
                print(json.dumps(reply), flush=True)
            elif prompt == "BAD_PROBS":
                reply = dict(CANNED)
                reply["type_probs"] = [1.0, 1.0, 0.0, 0.0, 0.0]
                print(json.dumps(reply), flush=True)
            elif prompt == "SILENCE":
                continue
            elif prompt == "DIE":
                sys.exit(3)
            else:
                print(json.dumps(CANNED), flush=True)


if __name__ == "__main__":
    main()
