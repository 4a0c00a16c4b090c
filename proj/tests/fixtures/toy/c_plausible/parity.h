int is_even(int num);
