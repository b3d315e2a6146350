#!/usr/bin/env python3
# Copyright 2026 The Quixer Simulator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Download the Mikolov Penn Treebank splits into data/ptb."""

import argparse
import pathlib
import sys
import urllib.request

BASE = "https://raw.githubusercontent.com/wojzaremba/lstm/master/data/"
SPLITS = ("ptb.train.txt", "ptb.valid.txt", "ptb.test.txt")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "ptb",
                        type=pathlib.Path)
    parser.add_argument("--base-url", default=BASE)
    parser.add_argument("--force", action="store_true", help="re-download existing files")
    args = parser.parse_args()

    args.dest.mkdir(parents=True, exist_ok=True)
    for name in SPLITS:
        target = args.dest / name
        if target.exists() and not args.force:
            print(f"{target} exists, skipping")
            continue
        url = args.base_url + name
        print(f"fetching {url}")
        with urllib.request.urlopen(url, timeout=60) as resp:
            data = resp.read()
        tmp = target.with_suffix(".part")
        tmp.write_bytes(data)
        tmp.replace(target)
        print(f"wrote {target} ({len(data)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
