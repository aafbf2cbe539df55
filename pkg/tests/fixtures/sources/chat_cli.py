#!/usr/bin/env python3
"""Tiny command line chat client fixture."""

import json
import os
import sys

API_URL = "https://api.example.invalid/v1/chat"
HISTORY_FILE = os.path.expanduser("~/.chat_history.json")
VERSION = "0.0.3"


def load_history():
    if not os.path.exists(HISTORY_FILE):
        return []
    with open(HISTORY_FILE) as fh:
        records = json.load(fh)
    messages = []
    for record in records:
        if not record.get("content"):
            continue
        messages.append({"role": record["role"], "content": record["content"]})
    return messages


def send(messages):
    # stand-in for the real API call
    return {"role": "assistant", "content": "ok"}


def interactive(messages):
    print("chat shell; type 'exit' to quit")
    while True:
        prompt = input("> ")
        if prompt == "exit":
            break
        messages.append({"role": "user", "content": prompt})
        reply = send(messages)
        print(reply["content"])
        messages.append(reply)


def main(argv):
    if "--version" in argv:
        print(VERSION)
        return 0
    messages = load_history()
    prompt = " ".join(a for a in argv if not a.startswith("-"))
    if "--shell" in argv:
        interactive(messages)
    elif prompt:
        messages.append({"role": "user", "content": prompt})
        reply = send(messages)
        print(reply["content"])
    with open(HISTORY_FILE, "w") as fh:
        json.dump(messages, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
