#include <stdio.h>
#include <string.h>

#include "parity.h"

static int run(const char* name, int ok)
{
    if (!ok)
        printf("FAIL: %s\n", name);
    return ok ? 0 : 1;
}

static int selected(int argc, char** argv, const char* name)
{
    int all = 0;
    for (int i = 1; i < argc; i++) {
        if (strcmp(argv[i], "--exclude") == 0) {
            for (int j = i + 1; j < argc; j++)
                if (strcmp(argv[j], name) == 0)
                    return 0;
            break;
        }
        if (strcmp(argv[i], "all") == 0 || strcmp(argv[i], name) == 0)
            all = 1;
    }
    return all;
}

int main(int argc, char** argv)
{
    int failed = 0;
    if (selected(argc, argv, "test_two"))
        failed += run("test_two", is_even(2) == 1);
    if (selected(argc, argv, "test_three"))
        failed += run("test_three", is_even(3) == 0);
    if (selected(argc, argv, "test_flaky"))
        failed += run("test_flaky", 0);
    return failed ? 1 : 0;
}
