from pcf_learned_sort.cli import main

raise SystemExit(main())
