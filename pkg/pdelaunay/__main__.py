from pdelaunay.app.main import main

raise SystemExit(main())
