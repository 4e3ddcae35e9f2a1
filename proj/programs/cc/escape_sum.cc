10 + callcc k. (throw 1 to k) + 5
