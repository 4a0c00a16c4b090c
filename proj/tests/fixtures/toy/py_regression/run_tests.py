import sys

from clamp import clamp


def test_above():
    assert clamp(15, 0, 10) == 10


def test_below():
    assert clamp(-5, 0, 10) == 0


def test_inside():
    assert clamp(5, 0, 10) == 5


def test_other_range():
    assert clamp(50, 0, 20) == 20


TESTS = {name: fn for name, fn in globals().items() if name.startswith("test_")}


def main(argv):
    names, excluded = [], []
    target = names
    for arg in argv:
        if arg == "--exclude":
            target = excluded
        else:
            target.append(arg)
    failed = 0
    for name, fn in TESTS.items():
        if (names and name not in names) or name in excluded:
            continue
        try:
            fn()
        except Exception:
            print("FAIL: " + name)
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
