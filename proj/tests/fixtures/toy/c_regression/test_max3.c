#include <stdio.h>
#include <string.h>

#include "max3.h"

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
    if (selected(argc, argv, "test_middle_largest"))
        failed += run("test_middle_largest", max3(1, 5, 3) == 5);
    if (selected(argc, argv, "test_first_largest"))
        failed += run("test_first_largest", max3(3, 2, 1) == 3);
    if (selected(argc, argv, "test_last_largest"))
        failed += run("test_last_largest", max3(1, 2, 3) == 3);
    if (selected(argc, argv, "test_first_over_last"))
        failed += run("test_first_over_last", max3(5, 1, 3) == 5);
    return failed ? 1 : 0;
}
